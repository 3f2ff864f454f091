"""Every catalog case swept on its default grid, then the two open-question sweeps.

Run with ``python3 demos/03_catalog_tour.py`` (about ten seconds).
"""
from fbiharm import compare_oracle, list_cases, sweep
from fbiharm.catalog import BUILDER_NAMES, build_case
from fbiharm.verify import example_2_2_sweep, gauss_curvature_sweep

cases = list_cases() + [build_case(n) for n in BUILDER_NAMES]
print(f"{'case':<28}{'mode':<22}{'raw sup':>10}{'normalized':>12}  verdict  oracle")
for case in cases:
    rep = sweep(case)
    orc = compare_oracle(case, conformal=False)
    print(f"{case.name:<28}{rep.mode:<22}{rep.sup:>10.2e}{rep.sup_normalized:>12.2e}  "
          f"{rep.verdict:<7}  {orc.sup:.1e}")

# The stated profile for the quadratic target contains neither k nor C₀;
# tabulate where it actually works
rows = example_2_2_sweep()
print("\n(k, C0) pairs passing for every C:")
for k in sorted({row["k"] for row in rows}):
    for c0 in sorted({row["C0"] for row in rows}):
        verdicts = {row["verdict"] for row in rows if row["k"] == k and row["C0"] == c0}
        if verdicts == {"pass"}:
            print(f"  k={k:+.1f} C0={c0:+.1f}")

print("\nGauss curvature of dρ² + ρ dφ²:")
for row in gauss_curvature_sweep():
    print(f"  ρ={row['rho']:4.1f}  K={row['K']:.6f}  1/(4ρ)={row['1/(4rho)']:.6f}  "
          f"1/(4ρ²)={row['1/(4rho^2)']:.6f}  -> {row['matches']}")
