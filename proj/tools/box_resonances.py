# Transmission poles of box(a, depth) for -h^2 u'' + V u, refined with mpmath.
# usage: box_resonances.py a depth h re im [re im ...]
import sys
import mpmath as mp

mp.mp.dps = 40


def denom(z, a, depth, h):
    k = mp.sqrt(z) / h
    q = mp.sqrt(z - depth) / h
    return mp.cos(2 * q * a) - 1j * (k * k + q * q) / (2 * k * q) * mp.sin(2 * q * a)


def main():
    a, depth, h = map(mp.mpf, sys.argv[1:4])
    guesses = list(map(float, sys.argv[4:]))
    for re, im in zip(guesses[::2], guesses[1::2]):
        w = mp.findroot(lambda z: denom(z, a, depth, h), mp.mpc(re, im))
        print(mp.nstr(w.real, 20), mp.nstr(w.imag, 20))


if __name__ == "__main__":
    main()
