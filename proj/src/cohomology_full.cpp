#include <algorithm>
#include <chrono>
#include <unordered_map>

#include "cohomology_detail.hpp"

namespace rlie::detail {
namespace {

constexpr std::size_t npos = WeightContext::npos;

Coeff coeff_at(const SparseVec& v, std::size_t k) {
  auto it = std::lower_bound(v.begin(), v.end(), k, [](const Term& t, std::size_t i) { return t.index < i; });
  return it != v.end() && it->index == k ? it->coeff : 0;
}

class FullBlock {
 public:
  explicit FullBlock(const BlockInput& in) : in_(in), X_(*in.ctx), L_(X_.L), F_(X_.F), n_(X_.n), p_(X_.p) {}
  BlockOutput run();

 private:
  const BlockInput& in_;
  const WeightContext& X_;
  const LieAlgebra& L_;
  const PrimeField& F_;
  std::size_t n_;
  std::uint32_t p_;
  std::unordered_map<std::size_t, std::size_t> c2_;  // cochain_index -> column
  std::unordered_map<std::size_t, std::size_t> om_;  // i n + l -> column after C^2
  std::size_t n2_ = 0;

  Weight shift(const Weight& a, const Weight& b) const { return X_.G.normalize(X_.G.add(a, b)); }
  std::size_t cls_of(const Weight& w) const { return X_.find(w); }
  // adds v * f(a, b)_k to a row; zero when the column is outside the block
  void addf(std::vector<Term>& row, std::size_t a, std::size_t b, std::size_t k, Coeff v) const {
    if (a == b || v == 0) return;
    if (a > b) {
      std::swap(a, b);
      v = F_.neg(v);
    }
    auto it = c2_.find(cochain_index(n_, {a, b}, k));
    if (it != c2_.end()) row.push_back({static_cast<std::uint32_t>(it->second), v});
  }
};

BlockOutput FullBlock::run() {
  const auto t0 = std::chrono::steady_clock::now();
  BlockOutput out;
  BlockStat& st = out.stat;
  st.weight = in_.c;
  const Weight& c = in_.c;
  const bool restricted = in_.pmap != nullptr;

  // columns
  std::vector<std::pair<std::size_t, std::size_t>> c1;
  for (std::size_t a = 0; a < n_; ++a)
    if (const std::size_t tb = cls_of(shift(X_.w(a), c)); tb != npos)
      for (std::size_t b : X_.members[tb]) c1.emplace_back(a, b);
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = a + 1; b < n_; ++b)
      if (const std::size_t tk = cls_of(shift(shift(X_.w(a), X_.w(b)), c)); tk != npos)
        for (std::size_t k : X_.members[tk]) c2_.emplace(cochain_index(n_, {a, b}, k), n2_++);
  std::size_t nw = 0;
  if (restricted)
    for (std::size_t i = 0; i < n_; ++i)
      if (const std::size_t tl = cls_of(shift(X_.G.scale(X_.w(i), p_), c)); tl != npos)
        for (std::size_t l : X_.members[tl]) om_.emplace(i * n_ + l, n2_ + nw++);
  const std::size_t width = n2_ + nw;
  st.unknowns = width;
  st.transports = c1.size();

  // d0: ad of the weight-c basis vectors
  std::size_t r0 = 0;
  if (const std::size_t tc = cls_of(c); tc != npos) {
    std::vector<SparseVec> rows;
    for (std::size_t m : X_.members[tc]) {
      std::vector<Term> t;
      for (std::size_t a = 0; a < n_; ++a)
        for (const Term& b : L_.bracket(a, m)) t.push_back({static_cast<std::uint32_t>(a * n_ + b.index), b.coeff});
      rows.push_back(F_.normalize(std::move(t)));
    }
    r0 = rank(F_, SparseMatrix(n_ * n_, std::move(rows)));
  }

  // d1 phi and the transports, phi = (a -> b)
  std::vector<std::vector<std::pair<std::pair<std::size_t, std::size_t>, Coeff>>> inv(n_);
  for (std::size_t x = 0; x < n_; ++x)
    for (std::size_t y = x + 1; y < n_; ++y)
      for (const Term& t : L_.bracket(x, y)) inv[t.index].push_back({{x, y}, t.coeff});
  std::vector<SparseVec> d1rows, trows;
  for (const auto& [a, b] : c1) {
    std::vector<Term> row;
    for (std::size_t x = 0; x < a; ++x)
      for (const Term& t : L_.bracket(x, b)) addf(row, x, a, t.index, t.coeff);
    for (std::size_t y = a + 1; y < n_; ++y)
      for (const Term& t : L_.bracket(y, b)) addf(row, a, y, t.index, F_.neg(t.coeff));
    for (const auto& [xy, v] : inv[a]) addf(row, xy.first, xy.second, b, F_.neg(v));
    d1rows.push_back(F_.normalize(row));
    if (restricted) {
      auto addw = [&](std::size_t i, std::size_t l, Coeff v) {
        if (!v) return;
        auto it = om_.find(i * n_ + l);
        if (it == om_.end()) throw Error("transport leaves the weight block");
        row.push_back({static_cast<std::uint32_t>(it->second), v});
      };
      Vec e = F_.unit(n_, b);
      for (std::uint32_t m = 0; m + 1 < p_; ++m) e = L_.ad(a, e);
      for (std::size_t k = 0; k < n_; ++k) addw(a, k, e[k]);
      for (std::size_t i = 0; i < n_; ++i) addw(i, b, F_.neg(coeff_at((*in_.pmap)[i], a)));
      trows.push_back(F_.normalize(std::move(row)));
    }
  }
  const std::size_t r1 = rank(F_, SparseMatrix(std::max<std::size_t>(n2_, 1), d1rows));

  // d2 rows (x < y < z, m)
  std::vector<SparseVec> zrows;
  for (std::size_t x = 0; x < n_; ++x)
    for (std::size_t y = x + 1; y < n_; ++y) {
      const Weight wxy = shift(X_.w(x), X_.w(y));
      for (std::size_t z = y + 1; z < n_; ++z) {
        const std::size_t tm = cls_of(shift(shift(wxy, X_.w(z)), c));
        if (tm == npos) continue;
        for (std::size_t m : X_.members[tm]) {
          std::vector<Term> row;
          // [u, f(v, w)]_m with sign
          auto outer = [&](std::size_t u, std::size_t v, std::size_t w, Coeff sign) {
            const std::size_t tk = cls_of(shift(shift(X_.w(v), X_.w(w)), c));
            if (tk == npos) return;
            for (std::size_t k : X_.members[tk]) addf(row, v, w, k, F_.mul(sign, coeff_at(L_.bracket(u, k), m)));
          };
          auto inner = [&](std::size_t u, std::size_t v, std::size_t w, Coeff sign) {
            for (const Term& t : L_.bracket(u, v)) addf(row, t.index, w, m, F_.mul(sign, t.coeff));
          };
          const Coeff one = 1, minus = F_.neg(1);
          outer(x, y, z, one);
          outer(y, x, z, minus);
          outer(z, x, y, one);
          inner(x, y, z, minus);
          inner(x, z, y, one);
          inner(y, z, x, minus);
          zrows.push_back(F_.normalize(std::move(row)));
        }
      }
    }
  const std::size_t r2 = rank(F_, SparseMatrix(std::max<std::size_t>(n2_, 1), zrows));

  st.h1 = c1.size() - r1 - r0;
  st.h2 = n2_ - r2 - r1;

  if (restricted && width > 0) {
    // condition rows (i, j, k): [omega(e_i), e_j] + f(e_i^[p], e_j)
    //   - sum_t (ad e_i)^t f(e_i, (ad e_i)^{p-1-t} e_j)
    for (std::size_t i = 0; i < n_; ++i) {
      const Weight pw = X_.G.scale(X_.w(i), p_);
      const std::size_t tl = cls_of(shift(pw, c));
      std::vector<std::vector<SparseVec>> pc(p_, std::vector<SparseVec>(n_));
      for (std::size_t m = 0; m < n_; ++m) {
        Vec v = F_.unit(n_, m);
        for (std::uint32_t t = 0; t < p_; ++t) {
          pc[t][m] = F_.to_sparse(v);
          v = L_.ad(i, v);
        }
      }
      for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t tk = cls_of(shift(shift(pw, X_.w(j)), c));
        if (tk == npos) continue;
        const auto& outm = X_.members[tk];
        std::vector<std::vector<Term>> rows(outm.size());
        auto slot = [&](std::size_t k) { return X_.local[k]; };
        if (tl != npos)
          for (std::size_t l : X_.members[tl])
            for (const Term& t : L_.bracket(l, j))
              rows[slot(t.index)].push_back({static_cast<std::uint32_t>(om_.at(i * n_ + l)), t.coeff});
        for (const Term& a : (*in_.pmap)[i])
          for (std::size_t k : outm) addf(rows[slot(k)], a.index, j, k, a.coeff);
        for (std::uint32_t t = 0; t < p_; ++t)
          for (const Term& z : pc[p_ - 1 - t][j]) {
            const std::size_t tz = cls_of(shift(shift(X_.w(i), X_.w(z.index)), c));
            if (tz == npos) continue;
            for (std::size_t m : X_.members[tz])
              for (const Term& k : pc[t][m]) addf(rows[slot(k.index)], i, z.index, m, F_.neg(F_.mul(z.coeff, k.coeff)));
          }
        for (auto& r : rows) zrows.push_back(F_.normalize(std::move(r)));
      }
    }
    const std::size_t rz = rank(F_, SparseMatrix(width, std::move(zrows)));
    const std::size_t rt = rank(F_, SparseMatrix(width, trows));
    st.h2_restricted = width - rz - rt;
  }
  st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

BlockOutput solve_block_full(const BlockInput& in) { return FullBlock(in).run(); }

}  // namespace rlie::detail
