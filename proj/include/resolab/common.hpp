#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <eigen3/Eigen/Dense>

namespace resolab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr cplx I_unit{0.0, 1.0};

enum class ErrorKind {
  Branch,
  DivisionByZero,
  EigenFailure,
  SingularShift,
  ZeroOnPath,
  NonIntegerWinding,
  BoundaryZero,
  BudgetExceeded,
  PathTooCloseToResonance,
  ProfileTooSteep,
  RealResonanceOnGrid,
  IllConditionedFit,
  SeriesDivergence,
  GridTooSmall,
  Config
};

const char* error_name(ErrorKind k);

// Base for every numerical failure; the CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

template <ErrorKind K>
class KindError : public Error {
 public:
  explicit KindError(const std::string& what) : Error(K, what) {}
};

using BranchError = KindError<ErrorKind::Branch>;
using DivisionByZero = KindError<ErrorKind::DivisionByZero>;
using EigenFailure = KindError<ErrorKind::EigenFailure>;
using SingularShift = KindError<ErrorKind::SingularShift>;
using ZeroOnPath = KindError<ErrorKind::ZeroOnPath>;
using NonIntegerWinding = KindError<ErrorKind::NonIntegerWinding>;
using BoundaryZero = KindError<ErrorKind::BoundaryZero>;
using BudgetExceeded = KindError<ErrorKind::BudgetExceeded>;
using PathTooCloseToResonance = KindError<ErrorKind::PathTooCloseToResonance>;
using ProfileTooSteep = KindError<ErrorKind::ProfileTooSteep>;
using RealResonanceOnGrid = KindError<ErrorKind::RealResonanceOnGrid>;
using IllConditionedFit = KindError<ErrorKind::IllConditionedFit>;
using SeriesDivergence = KindError<ErrorKind::SeriesDivergence>;
using GridTooSmall = KindError<ErrorKind::GridTooSmall>;
using ConfigError = KindError<ErrorKind::Config>;

}  // namespace resolab
