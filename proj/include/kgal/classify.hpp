#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "kgal/cohomology.hpp"
#include "kgal/common.hpp"
#include "kgal/datum.hpp"
#include "kgal/group.hpp"
#include "kgal/tower.hpp"

// Sweep driver: enumerate every construction datum for one ambient group
// over a catalog of towers, then sort the results into equivalence
// classes.  The sweep walks subgroups S up to conjugacy, normal subgroups
// N of S away from the characteristic, catalog towers whose Galois group
// has order [S:N] under every identification, non-degenerate cocycle
// class representatives, and finally all gamma tables.  Output order is
// the enumeration order, independent of the number of worker threads.

namespace kgal {

struct ClassifyBounds {
  int max_group = 32;          // ambient group order
  long max_root_order = 32;    // designated root-of-unity order per tower
  unsigned long long max_classes = 1u << 12;  // cohomology transversal size
  unsigned long long max_tables = 1u << 20;   // gamma tables per cocycle
  int jobs = 1;

  // Optional restrictions, all at parent level.
  std::optional<Subgroup> fix_S;
  std::optional<Subgroup> fix_N;
  std::optional<Cochain> fix_sigma;  // over the local N frame of each combo
};

struct ClassifiedDatum {
  GaloisDatum d;
  // Enumeration coordinates, for stable addressing of results.
  int s_index = 0;
  int n_index = 0;
  int tower_index = 0;
  int iso_index = 0;
  int sigma_index = 0;
  int gamma_index = 0;
  bool stamp = false;  // block verification verdict
};

struct ClassifyResult {
  std::vector<ClassifiedDatum> data;      // validated data, enumeration order
  std::vector<std::vector<char>> matrix;  // pairwise equivalence verdicts
  std::vector<int> class_of;              // equivalence class per entry
  std::vector<int> representatives;       // first entry of each class
};

namespace cldetail {

struct SweepTask {
  int s_index, n_index, tower_index, sigma_index;
  Subgroup S;              // parent level
  std::vector<int> N_loc;  // local to S, sorted
  Cochain sigma;
};

inline std::vector<ClassifiedDatum> run_task(const FiniteGroup& G,
                                             const std::vector<FieldTower>& catalog,
                                             const ClassifyBounds& bounds,
                                             const SweepTask& task) {
  const FieldTower& K = catalog[task.tower_index];
  SubgroupView SV = subgroup_as_group(G, task.S);
  Subgroup all(SV.group.n);
  for (int i = 0; i < SV.group.n; ++i) all[i] = i;
  QuotientGroup Q = quotient_group(SV.group, all, task.N_loc);

  GaloisDatum shell;
  shell.K = K;
  shell.G = G;
  shell.S = task.S;
  for (int x : task.N_loc) shell.N.push_back(SV.to_parent[x]);
  std::sort(shell.N.begin(), shell.N.end());
  shell.sigma = task.sigma;

  std::vector<ClassifiedDatum> out;
  std::vector<GroupHom> isos =
      enumerate_isomorphisms(Q.group, K.galois_group());
  for (int ii = 0; ii < (int)isos.size(); ++ii) {
    GaloisDatum d = shell;
    d.gal_of.resize(SV.group.n);
    for (int s = 0; s < SV.group.n; ++s) d.gal_of[s] = isos[ii].map[Q.proj[s]];
    if (!validate_structure(d).ok) continue;
    std::vector<std::vector<long>> tables = solve_gamma(d, bounds.max_tables);
    for (int gi = 0; gi < (int)tables.size(); ++gi) {
      ClassifiedDatum c;
      c.d = d;
      c.d.gamma = tables[gi];
      c.s_index = task.s_index;
      c.n_index = task.n_index;
      c.tower_index = task.tower_index;
      c.iso_index = ii;
      c.sigma_index = task.sigma_index;
      c.gamma_index = gi;
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace cldetail

inline ClassifyResult classify(const FiniteGroup& G,
                               const std::vector<FieldTower>& catalog,
                               const ClassifyBounds& bounds = {}) {
  if (G.n > bounds.max_group)
    throw unsupported("ambient group exceeds the classification bound");
  for (const auto& K : catalog)
    if (K.root_order() > bounds.max_root_order)
      throw unsupported("catalog tower exceeds the root order bound");
  if (bounds.fix_S) require(is_subgroup(G, *bounds.fix_S),
                            "fixed S is not a subgroup");
  if (bounds.fix_N) require(is_subgroup(G, *bounds.fix_N),
                            "fixed N is not a subgroup");

  // Deterministic task list over (S, N, tower, cocycle class).
  std::vector<cldetail::SweepTask> tasks;
  std::vector<Subgroup> subs;
  if (bounds.fix_S)
    subs.push_back(*bounds.fix_S);
  else
    subs = enumerate_subgroups(G, true);

  for (int si = 0; si < (int)subs.size(); ++si) {
    const Subgroup& S = subs[si];
    SubgroupView SV = subgroup_as_group(G, S);
    Subgroup all(SV.group.n);
    for (int i = 0; i < SV.group.n; ++i) all[i] = i;

    std::vector<std::vector<int>> normals;
    for (const Subgroup& Nl : enumerate_subgroups(SV.group, false))
      if (is_normal_in(SV.group, Nl, all)) normals.push_back(Nl);

    for (int ni = 0; ni < (int)normals.size(); ++ni) {
      const std::vector<int>& Nl = normals[ni];
      if (bounds.fix_N) {
        std::vector<int> want;
        bool inside = true;
        for (int n : *bounds.fix_N) {
          int loc = SV.from_parent[n];
          if (loc < 0) inside = false;
          else want.push_back(loc);
        }
        std::sort(want.begin(), want.end());
        if (!inside || want != Nl) continue;
      }

      for (int ti = 0; ti < (int)catalog.size(); ++ti) {
        const FieldTower& K = catalog[ti];
        if ((long)K.K_over_k() * (long)Nl.size() != (long)S.size()) continue;
        if (K.characteristic() != 0 && (long)Nl.size() % K.characteristic() == 0)
          continue;

        SubgroupView NV = subgroup_as_group(SV.group, Nl);
        std::vector<Cochain> reps;
        if (bounds.fix_sigma) {
          reps.push_back(*bounds.fix_sigma);
        } else {
          reps = cohomology_transversal(NV.group, K.root_order(),
                                        bounds.max_classes);
        }
        for (int ci = 0; ci < (int)reps.size(); ++ci) {
          const Cochain& s = reps[ci];
          if (s.degree != 2 || s.n != NV.group.n || s.mod != K.root_order())
            continue;
          if (!is_normalized(s) || !is_two_cocycle(NV.group, s)) continue;
          if (!is_nondegenerate(NV.group, s)) continue;
          tasks.push_back({si, ni, ti, ci, S, Nl, s});
        }
      }
    }
  }

  // Pure tasks, merged in task order regardless of completion order.
  std::vector<std::vector<ClassifiedDatum>> slots(tasks.size());
  int jobs = bounds.jobs < 1 ? 1 : bounds.jobs;
  if (jobs <= 1 || tasks.size() <= 1) {
    for (size_t t = 0; t < tasks.size(); ++t)
      slots[t] = cldetail::run_task(G, catalog, bounds, tasks[t]);
  } else {
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&]() {
      for (;;) {
        size_t t = next.fetch_add(1);
        if (t >= tasks.size()) return;
        try {
          slots[t] = cldetail::run_task(G, catalog, bounds, tasks[t]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs && (size_t)j < tasks.size(); ++j)
      pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }

  ClassifyResult res;
  for (auto& slot : slots)
    for (auto& c : slot) res.data.push_back(std::move(c));

  for (auto& c : res.data) c.stamp = verify_simple_fast(c.d).verdict;

  const int n = (int)res.data.size();
  res.matrix.assign(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) res.matrix[i][i] = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto w = are_equivalent(res.data[i].d, res.data[j].d);
      if (!w) continue;
      // Every positive verdict must be certified by the explicit block
      // isomorphism; a bare witness that fails to intertwine is a bug.
      if (!witness_intertwines(res.data[i].d, res.data[j].d, *w))
        throw kgal_error("equivalence witness fails the intertwiner check");
      res.matrix[i][j] = res.matrix[j][i] = 1;
    }

  res.class_of.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int r : res.representatives)
      if (res.matrix[r][i]) {
        res.class_of[i] = res.class_of[r];
        break;
      }
    if (res.class_of[i] < 0) {
      res.class_of[i] = (int)res.representatives.size();
      res.representatives.push_back(i);
    }
  }
  return res;
}

}  // namespace kgal
