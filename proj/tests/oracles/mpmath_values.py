# Regenerates the constants in tests/support/oracles.hpp.
import mpmath as mp

mp.mp.dps = 30

for n in [0, 1, 15, 16, 100, 500, 1000, 100000]:
    print("gram", n, mp.nstr(mp.grampoint(n), 20))
for t in ["100", "10000", "1000.5"]:
    print("theta", t, mp.nstr(mp.siegeltheta(mp.mpf(t)), 20))
print("theta 2*pi*e", mp.nstr(mp.siegeltheta(2 * mp.pi * mp.e), 20))
for t in ["50", "300", "12345.678", "1000.5", "100000.123", "150000.5", "1000000.5"]:
    print("Z", t, mp.nstr(mp.siegelz(mp.mpf(t)), 20))
for j in [1, 2, 15, 16, 17, 138, 1041, 1042]:
    print("zero", j, mp.nstr(mp.zetazero(j).imag, 20))

# Zero counts per Gram interval (g_n, g_{n+1}] for n < 200.
G = [mp.grampoint(n) for n in range(202)]
Z = [mp.zetazero(j).imag for j in range(1, 260)]
ks = [sum(1 for z in Z if G[n] < z <= G[n + 1]) for n in range(201)]
print("non-F1 intervals", [(n, k) for n, k in enumerate(ks) if k != 1][:10])
print("zeros below g0", sum(1 for z in Z if z <= G[0]))
print("N(100)", sum(1 for z in Z if z <= 100))
