#include "sampled_linear.hpp"

#include <set>

#include "modular.hpp"

namespace fgordon::detail {

namespace {

struct Slots {
  std::set<int> coord_keys;
  std::vector<std::pair<FuncKind, Expression>> funcs;

  void add(const Expression& e) {
    for (int k : e.coordinate_keys()) coord_keys.insert(k);
    for (auto& [kind, arg] : e.function_atoms()) {
      bool dup = false;
      for (auto& [k2, a2] : funcs)
        if (k2 == kind && Expression::compare(a2, arg) == 0) dup = true;
      if (!dup) funcs.emplace_back(kind, arg);
    }
  }
};

bool exact_check(const QMatrix& rows, const QVector& rhs,
                 const LinearSolution& sol, int cols) {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Rational acc(0);
    for (int c = 0; c < cols; ++c)
      acc += rows[r][static_cast<std::size_t>(c)] *
             sol.particular[static_cast<std::size_t>(c)];
    if (acc != rhs[r]) return false;
    for (const auto& k : sol.kernel) {
      Rational kk(0);
      for (int c = 0; c < cols; ++c)
        kk += rows[r][static_cast<std::size_t>(c)] *
              k[static_cast<std::size_t>(c)];
      if (kk != 0) return false;
    }
  }
  return true;
}

}  // namespace

LinearSolution solve_by_sampling(const LinProblem& p, std::uint64_t seed) {
  LinearSolution fail;
  if (p.cols == 0) {
    fail.consistent = true;
    return fail;
  }
  if (p.conds.empty()) {
    LinearSolution all;
    all.consistent = true;
    all.particular.assign(static_cast<std::size_t>(p.cols), Rational(0));
    for (int c = 0; c < p.cols; ++c) {
      QVector v(static_cast<std::size_t>(p.cols), Rational(0));
      v[static_cast<std::size_t>(c)] = 1;
      all.kernel.push_back(std::move(v));
    }
    return all;
  }

  Slots slots;
  for (const auto& e : p.coeffs) slots.add(e);
  for (const auto& e : p.basis) slots.add(e);

  RationalSampler sampler(seed);
  const std::uint64_t p0 = nth_solver_prime(0);
  ModRref tracker(p.cols + 1, p0);
  QMatrix rows;
  QVector rhs;

  const int per_point = std::max<int>(1, static_cast<int>(p.conds.size()));
  const int min_points = p.cols / per_point + 3;
  const int max_points = 4 * min_points + 24;
  int quiet = 0;
  int prev_rank = -1;
  int points = 0;
  for (int attempt = 0; attempt < max_points + 32 && points < max_points;
       ++attempt) {
    Point pt;
    // Modest magnitudes keep the sampled rows compact; candidates are
    // checked exactly against every stored row afterwards.
    for (int k : slots.coord_keys) pt.coords[k] = sampler.next_small(1000);
    for (const auto& [kind, arg] : slots.funcs)
      pt.functions.emplace_back(kind, arg, sampler.next_small(1000));
    std::vector<Rational> cval(p.coeffs.size());
    std::vector<Rational> bval(p.basis.size());
    try {
      for (std::size_t i = 0; i < p.coeffs.size(); ++i)
        cval[i] = p.coeffs[i].evaluate(pt).value;
      for (std::size_t i = 0; i < p.basis.size(); ++i)
        bval[i] = p.basis[i].evaluate(pt).value;
    } catch (const PoleError&) {
      continue;
    } catch (const EvalError&) {
      continue;
    }
    ++points;
    for (const auto& cond : p.conds) {
      QVector row(static_cast<std::size_t>(p.cols), Rational(0));
      for (const auto& t : cond.terms) {
        Rational v(1);
        if (t.coeff_id >= 0) v *= cval[static_cast<std::size_t>(t.coeff_id)];
        if (t.basis_id >= 0) v *= bval[static_cast<std::size_t>(t.basis_id)];
        row[static_cast<std::size_t>(t.col)] += v;
      }
      Rational b = cond.rhs_id >= 0
                       ? cval[static_cast<std::size_t>(cond.rhs_id)]
                       : Rational(0);
      std::vector<std::uint64_t> mrow(static_cast<std::size_t>(p.cols) + 1);
      bool reducible = true;
      for (int c = 0; c < p.cols && reducible; ++c) {
        auto v = mod_reduce(row[static_cast<std::size_t>(c)], p0);
        if (!v)
          reducible = false;
        else
          mrow[static_cast<std::size_t>(c)] = *v;
      }
      if (reducible) {
        auto v = mod_reduce(b, p0);
        if (v)
          mrow[static_cast<std::size_t>(p.cols)] = *v;
        else
          reducible = false;
      }
      if (!reducible) continue;  // vanishing-probability event; skip the row
      tracker.add(mrow);
      rows.push_back(std::move(row));
      rhs.push_back(std::move(b));
    }
    if (tracker.has_pivot(p.cols)) break;  // an inconsistency certificate row
    if (tracker.rank() == prev_rank)
      ++quiet;
    else
      quiet = 0;
    prev_rank = tracker.rank();
    if (tracker.rank() >= p.cols) {
      if (quiet >= 1) break;
    } else if (points >= min_points && quiet >= 2) {
      break;
    }
  }

  // CRT lifting over independent primes, with exact checking of every
  // reconstructed candidate against all stored rows.
  Integer modulus = 1;
  std::vector<Integer> part_res;
  std::vector<std::vector<Integer>> kern_res;
  std::vector<int> ref_pivots;
  int ref_rank = -1;
  int inconsistent_votes = 0;
  for (int pi = 0; pi < 16; ++pi) {
    std::uint64_t prime = nth_solver_prime(pi);
    ModSolution ms = mod_solve(rows, rhs, p.cols, prime);
    if (!ms.usable) continue;
    if (!ms.consistent) {
      if (++inconsistent_votes >= 2) return fail;
      continue;
    }
    if (ref_rank < 0 || ms.rank > ref_rank) {
      // adopt this prime's structure; restart accumulation
      ref_rank = ms.rank;
      ref_pivots = ms.pivots;
      modulus = 1;
      part_res.assign(static_cast<std::size_t>(p.cols), Integer(0));
      kern_res.assign(p.want_kernel ? ms.kernel.size() : 0,
                      std::vector<Integer>(static_cast<std::size_t>(p.cols),
                                           Integer(0)));
    } else if (ms.rank < ref_rank || ms.pivots != ref_pivots) {
      continue;  // structurally bad prime
    }
    // CRT combine
    Integer pz;
    mpz_set_ui(pz.get_mpz_t(), prime);
    auto combine = [&](Integer& acc, std::uint64_t res) {
      if (modulus == 1) {
        mpz_set_ui(acc.get_mpz_t(), res);
        return;
      }
      // acc' == acc (mod modulus), acc' == res (mod prime)
      Integer rz;
      mpz_set_ui(rz.get_mpz_t(), res);
      Integer minv;
      if (mpz_invert(minv.get_mpz_t(), modulus.get_mpz_t(), pz.get_mpz_t()) ==
          0)
        throw std::logic_error("crt: moduli not coprime");
      Integer diff = ((rz - acc) % pz + pz) % pz;
      acc += modulus * ((diff * minv) % pz);
    };
    for (int c = 0; c < p.cols; ++c)
      combine(part_res[static_cast<std::size_t>(c)],
              ms.particular[static_cast<std::size_t>(c)]);
    if (p.want_kernel)
      for (std::size_t k = 0; k < kern_res.size(); ++k)
        for (int c = 0; c < p.cols; ++c)
          combine(kern_res[k][static_cast<std::size_t>(c)],
                  ms.kernel[k][static_cast<std::size_t>(c)]);
    modulus *= pz;

    // try to reconstruct
    LinearSolution cand;
    cand.consistent = true;
    cand.particular.resize(static_cast<std::size_t>(p.cols));
    bool ok = true;
    for (int c = 0; c < p.cols && ok; ++c) {
      auto v = rational_reconstruct(part_res[static_cast<std::size_t>(c)],
                                    modulus);
      if (!v)
        ok = false;
      else
        cand.particular[static_cast<std::size_t>(c)] = *v;
    }
    for (std::size_t k = 0; k < kern_res.size() && ok; ++k) {
      QVector vec(static_cast<std::size_t>(p.cols));
      for (int c = 0; c < p.cols && ok; ++c) {
        auto v = rational_reconstruct(kern_res[k][static_cast<std::size_t>(c)],
                                      modulus);
        if (!v)
          ok = false;
        else
          vec[static_cast<std::size_t>(c)] = *v;
      }
      if (ok) cand.kernel.push_back(std::move(vec));
    }
    if (ok && exact_check(rows, rhs, cand, p.cols)) return cand;
  }
  return fail;
}

}  // namespace fgordon::detail
