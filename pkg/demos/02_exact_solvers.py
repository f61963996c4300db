"""Three routes to the same optimum under a clustered rate table.

The brute-force oracle prices all 2^N - 1 groups into one LP; column
generation reaches the same value pricing profiles on demand; the
reduced dual certifies it with a polynomial-size LP (one constraint per
profile plus per-cluster price orderings) without producing a schedule.
"""

import time

from minsched import (RateVariant, TableRates, brute_force_solve,
                      build_rate_table, build_reduced_dual, generate_instance,
                      kmeans, reduced_dual_solve, run_colgen)

inst = generate_instance(seed=42, n_links=12, demand_lo=100, demand_hi=1500)
clustering = kmeans(inst.lengths, k=3, seed=42)
table = build_rate_table(inst, clustering, RateVariant.MEAN)

t0 = time.perf_counter()
oracle = brute_force_solve(inst, TableRates(table, clustering))
t_oracle = time.perf_counter() - t0
print(f"oracle:        {oracle.total:.6f}  "
      f"({2**inst.n_links - 1} columns, {t_oracle * 1e3:.1f} ms)")

t0 = time.perf_counter()
master = run_colgen(inst, table, clustering)
t_cg = time.perf_counter() - t0
print(f"column gen.:   {master.solution.objective:.6f}  "
      f"({master.n_columns} columns, {len(master.objective_history)} master "
      f"solves, {t_cg * 1e3:.1f} ms)")

t0 = time.perf_counter()
value, prices = reduced_dual_solve(inst, table, clustering)
t_dual = time.perf_counter() - t0
reduced = build_reduced_dual(inst, table, clustering)
print(f"reduced dual:  {value:.6f}  "
      f"({reduced.n_constraints} constraints vs {2**inst.n_links - 1} in the "
      f"full dual, {t_dual * 1e3:.1f} ms)")

print("\nschedule from column generation:")
for e in master.schedule().entries:
    print(f"  {e.duration:10.4f} s  links {sorted(e.group)}")
print(f"\ndual prices (descending within each cluster): "
      f"{[round(p, 4) for p in prices]}")
