# Regenerates the frozen reference values with mpmath at 50 digits.
import mpmath as mp

mp.mp.dps = 50


def tail(x):
    return mp.erfc(mp.mpf(x) / mp.sqrt(2)) / 2


with open("normal_tail.csv", "w") as f:
    f.write("x,tail\n")
    for i in range(17):
        x = mp.mpf(i) / 2
        f.write(f"{mp.nstr(x, 3)},{mp.nstr(tail(x), 25)}\n")
    for x in ["-8", "-3", "-1", "1.959963985", "0.1", "10", "20", "37"]:
        f.write(f"{x},{mp.nstr(tail(mp.mpf(x)), 25)}\n")

with open("mills_ratio.csv", "w") as f:
    f.write("c,n,ratio\n")
    for c in ["1", "0.5", "1.5"]:
        for e in range(3, 8):
            n = mp.mpf(10) ** e
            x = mp.mpf(c) * mp.sqrt(mp.log(n))
            r = 1 / (tail(x) * x * mp.sqrt(2 * mp.pi) * n ** (mp.mpf(c) ** 2 / 2))
            f.write(f"{c},{int(n)},{mp.nstr(r, 20)}\n")
