#include "modular.hpp"

#include <stdexcept>

namespace fgordon::detail {

namespace {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b,
                            std::uint64_t p) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b,
                            std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}

}  // namespace

std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p) {
  __int128 t = 0, newt = 1;
  __int128 r = static_cast<__int128>(p), newr = static_cast<__int128>(a % p);
  while (newr != 0) {
    __int128 q = r / newr;
    __int128 tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw std::domain_error("mod_inv: not invertible");
  if (t < 0) t += p;
  return static_cast<std::uint64_t>(t);
}

std::optional<std::uint64_t> mod_reduce(const Rational& r, std::uint64_t p) {
  Integer pz;
  mpz_set_ui(pz.get_mpz_t(), p);
  Integer dm = r.get_den() % pz;
  if (dm == 0) return std::nullopt;
  Integer nm = r.get_num() % pz;
  if (nm < 0) nm += pz;
  std::uint64_t n = mpz_get_ui(nm.get_mpz_t());
  std::uint64_t d = mpz_get_ui(dm.get_mpz_t());
  return mulmod(n, mod_inv(d, p), p);
}

bool ModRref::add(std::vector<std::uint64_t> row) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::uint64_t f = row[static_cast<std::size_t>(piv_[i])];
    if (f != 0) {
      for (int c = 0; c < width_; ++c)
        row[static_cast<std::size_t>(c)] =
            submod(row[static_cast<std::size_t>(c)],
                   mulmod(f, rows_[i][static_cast<std::size_t>(c)], p_), p_);
    }
  }
  int pc = -1;
  for (int c = 0; c < width_; ++c)
    if (row[static_cast<std::size_t>(c)] != 0) {
      pc = c;
      break;
    }
  if (pc < 0) return false;
  std::uint64_t inv = mod_inv(row[static_cast<std::size_t>(pc)], p_);
  for (int c = 0; c < width_; ++c)
    row[static_cast<std::size_t>(c)] =
        mulmod(row[static_cast<std::size_t>(c)], inv, p_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    std::uint64_t f = rows_[i][static_cast<std::size_t>(pc)];
    if (f != 0) {
      for (int c = 0; c < width_; ++c)
        rows_[i][static_cast<std::size_t>(c)] =
            submod(rows_[i][static_cast<std::size_t>(c)],
                   mulmod(f, row[static_cast<std::size_t>(c)], p_), p_);
    }
  }
  std::size_t pos = 0;
  while (pos < piv_.size() && piv_[pos] < pc) ++pos;
  piv_.insert(piv_.begin() + static_cast<std::ptrdiff_t>(pos), pc);
  rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos),
               std::move(row));
  return true;
}

bool ModRref::has_pivot(int col) const {
  for (int p : piv_)
    if (p == col) return true;
  return false;
}

ModSolution mod_solve(const QMatrix& a, const QVector& b, int cols,
                      std::uint64_t p) {
  ModSolution out;
  std::vector<std::vector<std::uint64_t>> mat;
  mat.reserve(a.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    std::vector<std::uint64_t> row(static_cast<std::size_t>(cols) + 1);
    for (int c = 0; c < cols; ++c) {
      auto v = mod_reduce(a[r][static_cast<std::size_t>(c)], p);
      if (!v) return out;  // prime divides a denominator: unusable
      row[static_cast<std::size_t>(c)] = *v;
    }
    auto v = mod_reduce(b[r], p);
    if (!v) return out;
    row[static_cast<std::size_t>(cols)] = *v;
    mat.push_back(std::move(row));
  }
  out.usable = true;

  std::vector<int> piv;
  std::size_t lead = 0;
  for (int col = 0; col <= cols && lead < mat.size(); ++col) {
    std::size_t pr = lead;
    while (pr < mat.size() && mat[pr][static_cast<std::size_t>(col)] == 0)
      ++pr;
    if (pr == mat.size()) continue;
    std::swap(mat[pr], mat[lead]);
    std::uint64_t inv = mod_inv(mat[lead][static_cast<std::size_t>(col)], p);
    for (int c = col; c <= cols; ++c)
      mat[lead][static_cast<std::size_t>(c)] =
          mulmod(mat[lead][static_cast<std::size_t>(c)], inv, p);
    for (std::size_t r = 0; r < mat.size(); ++r) {
      if (r == lead) continue;
      std::uint64_t f = mat[r][static_cast<std::size_t>(col)];
      if (f == 0) continue;
      for (int c = col; c <= cols; ++c)
        mat[r][static_cast<std::size_t>(c)] =
            submod(mat[r][static_cast<std::size_t>(c)],
                   mulmod(f, mat[lead][static_cast<std::size_t>(c)], p), p);
    }
    piv.push_back(col);
    ++lead;
  }
  for (int c : piv)
    if (c == cols) {
      out.consistent = false;
      out.rank = static_cast<int>(piv.size()) - 1;
      return out;
    }
  out.consistent = true;
  out.rank = static_cast<int>(piv.size());
  out.pivots = piv;

  std::vector<bool> is_piv(static_cast<std::size_t>(cols), false);
  for (int c : piv) is_piv[static_cast<std::size_t>(c)] = true;
  out.particular.assign(static_cast<std::size_t>(cols), 0);
  for (std::size_t i = 0; i < piv.size(); ++i)
    out.particular[static_cast<std::size_t>(piv[i])] =
        mat[i][static_cast<std::size_t>(cols)];
  for (int free = 0; free < cols; ++free) {
    if (is_piv[static_cast<std::size_t>(free)]) continue;
    std::vector<std::uint64_t> v(static_cast<std::size_t>(cols), 0);
    v[static_cast<std::size_t>(free)] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) {
      std::uint64_t entry = mat[i][static_cast<std::size_t>(free)];
      v[static_cast<std::size_t>(piv[i])] = entry == 0 ? 0 : p - entry;
    }
    out.kernel.push_back(std::move(v));
  }
  return out;
}

std::optional<Rational> rational_reconstruct(const Integer& r,
                                             const Integer& m) {
  Integer bound;
  mpz_sqrt(bound.get_mpz_t(), Integer(m / 2).get_mpz_t());
  Integer r0 = m, r1 = r % m;
  if (r1 < 0) r1 += m;
  Integer t0 = 0, t1 = 1;
  while (r1 > bound) {
    Integer q = r0 / r1;
    Integer tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (t1 == 0) return std::nullopt;
  Integer den = t1 < 0 ? Integer(-t1) : t1;
  Integer num = t1 < 0 ? Integer(-r1) : r1;
  if (den == 0 || den > bound) return std::nullopt;
  if (gcd(num, den) != 1) return std::nullopt;
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::uint64_t nth_solver_prime(int i) {
  static const std::vector<std::uint64_t> primes = [] {
    std::vector<std::uint64_t> out;
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, 62);
    for (int k = 0; k < 48; ++k) {
      mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
      out.push_back(mpz_get_ui(p.get_mpz_t()));
    }
    return out;
  }();
  return primes[static_cast<std::size_t>(i) % primes.size()];
}

}  // namespace fgordon::detail
