#include <chrono>
#include <deque>
#include <memory>

#include "cohomology_detail.hpp"

namespace rlie::detail {
namespace {

using Acc = std::uint64_t;
constexpr std::size_t npos = WeightContext::npos;

// Entry layout of an interior product I_v for v of a fixed weight: entry
// (z, k) exists when k lies in the class tcls[z].
struct Layout {
  std::vector<std::size_t> tcls;
  std::vector<std::size_t> off;
  std::vector<std::size_t> active;  // z with a nonempty class
  std::size_t size() const { return off.back(); }
};

// I_v(z)_k as linear forms in the f-parameters, one row of width Pf per entry.
struct Sym {
  const Layout* lay = nullptr;
  std::vector<Coeff> data;
};

struct ClassSpan {
  std::vector<Vec> rows;  // local coordinates, normalized at the pivot
  std::vector<std::size_t> piv;
  std::vector<Sym> I;
};

class BlockSolver {
 public:
  explicit BlockSolver(const BlockInput& in)
      : in_(in), X_(*in.ctx), L_(X_.L), F_(X_.F), n_(X_.n), p_(X_.p), S_(*in.S) {}

  BlockOutput run();

 private:
  const BlockInput& in_;
  const WeightContext& X_;
  const LieAlgebra& L_;
  const PrimeField& F_;
  std::size_t n_;
  std::uint32_t p_;
  const std::vector<std::size_t>& S_;
  std::map<Weight, Layout> layouts_;
  std::vector<std::size_t> fbase_;
  std::size_t Pf_ = 0, Pw_ = 0, P_ = 0;
  std::vector<std::size_t> wcls_, wbase_;
  std::vector<Sym> basisI_;

  const Grading& G() const { return X_.G; }
  Weight shift(const Weight& a, const Weight& b) const { return G().normalize(G().add(a, b)); }
  const Layout& layout(const Weight& wv);
  std::size_t gidx(std::size_t si, std::size_t z, std::size_t k) const;
  Sym reduce(const Layout& lay, const std::vector<Acc>& acc) const;
  Sym identity(std::size_t si);
  Sym recursion(std::size_t si, const SparseVec& v, const Sym& Iv);
  void add_rows(BatchedEchelon& E, const Sym& R) const;
};

const Layout& BlockSolver::layout(const Weight& wv) {
  auto it = layouts_.find(wv);
  if (it != layouts_.end()) return it->second;
  Layout lay;
  lay.tcls.resize(n_);
  lay.off.assign(n_ + 1, 0);
  const Weight base = shift(wv, in_.c);
  for (std::size_t z = 0; z < n_; ++z) {
    lay.tcls[z] = X_.find(shift(base, X_.w(z)));
    lay.off[z + 1] = lay.off[z] + (lay.tcls[z] == npos ? 0 : X_.members[lay.tcls[z]].size());
    if (lay.tcls[z] != npos) lay.active.push_back(z);
  }
  return layouts_.emplace(wv, std::move(lay)).first->second;
}

std::size_t BlockSolver::gidx(std::size_t si, std::size_t z, std::size_t k) const {
  const Layout& lay = layouts_.at(X_.w(S_[si]));
  return fbase_[si] + lay.off[z] + X_.local[k];
}

Sym BlockSolver::reduce(const Layout& lay, const std::vector<Acc>& acc) const {
  Sym out{&lay, std::vector<Coeff>(acc.size())};
  for (std::size_t i = 0; i < acc.size(); ++i) out.data[i] = static_cast<Coeff>(acc[i] % p_);
  return out;
}

Sym BlockSolver::identity(std::size_t si) {
  const Layout& lay = layout(X_.w(S_[si]));
  Sym out{&lay, std::vector<Coeff>(lay.size() * Pf_, 0)};
  for (std::size_t e = 0; e < lay.size(); ++e) out.data[e * Pf_ + fbase_[si] + e] = 1;
  return out;
}

// I_{[s,v]}(z) = [s, h(z)] - [v, g(z)] + [z, g(v)] - h([s,z]) + g([v,z])
// with h = I_v and g = I_s.
Sym BlockSolver::recursion(std::size_t si, const SparseVec& v, const Sym& Iv) {
  const std::size_t s = S_[si];
  const Layout& ls = layout(X_.w(s));
  const Layout& lv = *Iv.lay;
  const Weight wu = shift(X_.w(s), X_.w(v.front().index));
  const Layout& lu = layout(wu);
  const std::size_t Pf = Pf_;
  std::vector<Acc> acc(lu.size() * Pf, 0);
  auto addrow = [&](std::size_t e, Coeff coef, const Coeff* src) {
    Acc* dst = acc.data() + e * Pf;
    for (std::size_t j = 0; j < Pf; ++j) dst[j] += static_cast<Acc>(coef) * src[j];
  };
  auto out_entry = [&](std::size_t z, std::size_t m) { return lu.off[z] + X_.local[m]; };

  for (std::size_t z : lu.active) {
    // [s, h(z)]
    if (lv.tcls[z] != npos)
      for (std::size_t k : X_.members[lv.tcls[z]]) {
        const Coeff* row = Iv.data.data() + (lv.off[z] + X_.local[k]) * Pf;
        for (const Term& t : L_.bracket(s, k)) addrow(out_entry(z, t.index), t.coeff, row);
      }
    // -[v, g(z)]
    if (ls.tcls[z] != npos)
      for (std::size_t k : X_.members[ls.tcls[z]]) {
        const std::size_t q = gidx(si, z, k);
        for (const Term& a : v)
          for (const Term& t : L_.bracket(a.index, k))
            acc[out_entry(z, t.index) * Pf + q] += p_ - F_.mul(a.coeff, t.coeff);
      }
    // [z, g(v)]
    {
      const std::size_t tc = ls.tcls[v.front().index];
      if (tc != npos)
        for (std::size_t k : X_.members[tc])
          for (const Term& t : L_.bracket(z, k)) {
            const std::size_t e = out_entry(z, t.index);
            for (const Term& a : v) acc[e * Pf + gidx(si, a.index, k)] += F_.mul(a.coeff, t.coeff);
          }
    }
    // -h([s, z])
    for (const Term& t : L_.bracket(s, z)) {
      const std::size_t tt = lv.tcls[t.index];
      if (tt == npos) continue;
      for (std::size_t k : X_.members[tt])
        addrow(out_entry(z, k), p_ - t.coeff, Iv.data.data() + (lv.off[t.index] + X_.local[k]) * Pf);
    }
    // g([v, z])
    for (const Term& a : v)
      for (const Term& t : L_.bracket(a.index, z)) {
        const std::size_t tt = ls.tcls[t.index];
        if (tt == npos) continue;
        const Coeff coef = F_.mul(a.coeff, t.coeff);
        for (std::size_t k : X_.members[tt]) acc[out_entry(z, k) * Pf + gidx(si, t.index, k)] += coef;
      }
  }
  return reduce(lu, acc);
}

void BlockSolver::add_rows(BatchedEchelon& E, const Sym& R) const {
  Vec row(P_, 0);
  for (std::size_t e = 0; e < R.lay->size(); ++e) {
    const Coeff* src = R.data.data() + e * Pf_;
    std::copy(src, src + Pf_, row.begin());
    E.add(row);
  }
}

BlockOutput BlockSolver::run() {
  const auto t0 = std::chrono::steady_clock::now();
  BlockOutput out;
  BlockStat& st = out.stat;
  st.weight = in_.c;
  const bool restricted = in_.pmap != nullptr;

  fbase_.resize(S_.size());
  for (std::size_t si = 0; si < S_.size(); ++si) {
    fbase_[si] = Pf_;
    Pf_ += layout(X_.w(S_[si])).size();
  }
  if (restricted) {
    wcls_.resize(n_);
    wbase_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      wcls_[i] = X_.find(shift(G().scale(X_.w(i), p_), in_.c));
      wbase_[i] = Pw_;
      if (wcls_[i] != npos) Pw_ += X_.members[wcls_[i]].size();
    }
  }
  P_ = Pf_ + Pw_;
  st.unknowns = P_;

  // transports phi = (a -> b) of weight c
  std::vector<std::pair<std::size_t, std::size_t>> phis;
  for (std::size_t a = 0; a < n_; ++a) {
    const std::size_t tb = X_.find(shift(X_.w(a), in_.c));
    if (tb == npos) continue;
    for (std::size_t b : X_.members[tb]) phis.emplace_back(a, b);
  }
  st.transports = phis.size();

  std::size_t dim_Lc = 0;
  if (const std::size_t tc = X_.find(in_.c); tc != npos) dim_Lc = X_.members[tc].size();

  if (P_ == 0) {
    st.h1 = phis.size() - (dim_Lc - in_.center_dim);
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }
  BatchedEchelon cons(F_, P_);
  BatchedEchelon Tall(F_, P_);
  BatchedEchelon Tf(F_, std::max<std::size_t>(Pf_, 1));

  // spin the generating set, collecting the consistency constraints
  std::vector<ClassSpan> spans(X_.members.size());
  std::deque<std::pair<std::size_t, std::size_t>> queue;
  auto global = [&](std::size_t cls, const Vec& loc) {
    SparseVec v;
    for (std::size_t t = 0; t < loc.size(); ++t)
      if (loc[t]) v.push_back({static_cast<std::uint32_t>(X_.members[cls][t]), loc[t]});
    return v;
  };
  auto insert = [&](std::size_t cls, Vec loc, Sym I) {
    ClassSpan& sp = spans[cls];
    for (std::size_t j = 0; j < sp.rows.size(); ++j) {
      const Coeff a = loc[sp.piv[j]];
      if (!a) continue;
      const Coeff na = F_.neg(a);
      F_.axpy(loc, na, sp.rows[j]);
      F_.axpy(I.data, na, sp.I[j].data);
    }
    std::size_t piv = 0;
    while (piv < loc.size() && loc[piv] == 0) ++piv;
    if (piv == loc.size()) {
      add_rows(cons, I);
      return;
    }
    const Coeff s = F_.inv(loc[piv]);
    F_.scale(loc, s);
    F_.scale(I.data, s);
    sp.rows.push_back(std::move(loc));
    sp.piv.push_back(piv);
    sp.I.push_back(std::move(I));
    queue.emplace_back(cls, sp.rows.size() - 1);
  };
  for (std::size_t si = 0; si < S_.size(); ++si) {
    const std::size_t cls = X_.cls[S_[si]];
    Vec loc(X_.members[cls].size(), 0);
    loc[X_.local[S_[si]]] = 1;
    insert(cls, std::move(loc), identity(si));
  }
  while (!queue.empty()) {
    const auto [cls, j] = queue.front();
    queue.pop_front();
    const SparseVec v = global(cls, spans[cls].rows[j]);
    for (std::size_t si = 0; si < S_.size(); ++si) {
      Sym R = recursion(si, v, spans[cls].I[j]);
      const Vec u = L_.ad(S_[si], F_.to_dense(v, n_));
      std::size_t first = 0;
      while (first < n_ && u[first] == 0) ++first;
      if (first == n_) {
        add_rows(cons, R);
        continue;
      }
      const std::size_t uc = X_.cls[first];
      Vec loc(X_.members[uc].size(), 0);
      for (std::size_t t = 0; t < loc.size(); ++t) loc[t] = u[X_.members[uc][t]];
      insert(uc, std::move(loc), std::move(R));
    }
  }

  // interior products by basis vectors
  basisI_.resize(n_);
  for (std::size_t cls = 0; cls < spans.size(); ++cls) {
    const ClassSpan& sp = spans[cls];
    const std::size_t d = X_.members[cls].size();
    if (sp.rows.size() != d) throw PreconditionError("generating set does not generate the algebra");
    DenseMatrix M(d, d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t t = 0; t < d; ++t) M(j, t) = sp.rows[j][t];
    const DenseMatrix Minv = *inverse(F_, M);
    for (std::size_t b = 0; b < d; ++b) {
      const Layout& lay = *sp.I[0].lay;
      Sym I{&lay, std::vector<Coeff>(lay.size() * Pf_, 0)};
      for (std::size_t j = 0; j < d; ++j)
        if (Minv(b, j)) F_.axpy(I.data, Minv(b, j), sp.I[j].data);
      basisI_[X_.members[cls][b]] = std::move(I);
    }
  }
  auto Irow = [&](std::size_t a, std::size_t b, std::size_t k) {
    const Layout& lay = *basisI_[a].lay;
    return basisI_[a].data.data() + (lay.off[b] + X_.local[k]) * Pf_;
  };

  // antisymmetry
  {
    Vec row(P_, 0);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = a; b < n_; ++b) {
        const std::size_t tk = X_.find(shift(shift(X_.w(a), X_.w(b)), in_.c));
        if (tk == npos) continue;
        for (std::size_t k : X_.members[tk]) {
          const Coeff* x = Irow(a, b, k);
          std::copy(x, x + Pf_, row.begin());
          if (a != b) {
            const Coeff* y = Irow(b, a, k);
            for (std::size_t j = 0; j < Pf_; ++j) row[j] = F_.add(row[j], y[j]);
          }
          cons.add(row);
        }
      }
  }
  const std::size_t rank_f = cons.rank();
  const std::size_t dimZ2 = Pf_ - rank_f;

  // restricted condition on pairs (e_i, s)
  if (restricted) {
    const auto& pm = *in_.pmap;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t si = 0; si < S_.size(); ++si) {
        const std::size_t s = S_[si];
        const Weight wout = shift(shift(G().scale(X_.w(i), p_), X_.w(s)), in_.c);
        const std::size_t tk = X_.find(wout);
        if (tk == npos) continue;
        const auto& outm = X_.members[tk];
        std::vector<Vec> rows(outm.size(), Vec(P_, 0));
        // sum_m (ad e_i)^{p-1-m} I_{e_i}((ad e_i)^m s) by Horner
        std::vector<Vec> vs(p_);
        vs[0] = F_.unit(n_, s);
        for (std::uint32_t m = 1; m < p_; ++m) vs[m] = L_.ad(i, vs[m - 1]);
        const Layout& li = *basisI_[i].lay;
        std::vector<Acc> acc;
        std::size_t acls = npos;
        for (std::uint32_t m = 0; m < p_; ++m) {
          const Vec& v = vs[m];
          // acc <- ad(e_i) acc
          if (acls != npos) {
            const Weight wn = shift(X_.class_weight[acls], X_.w(i));
            const std::size_t ncls = X_.find(wn);
            std::vector<Acc> next;
            if (ncls != npos) {
              next.assign(X_.members[ncls].size() * Pf_, 0);
              const auto& mem = X_.members[acls];
              for (std::size_t t = 0; t < mem.size(); ++t) {
                for (std::size_t j = 0; j < Pf_; ++j) acc[t * Pf_ + j] %= p_;
                for (const Term& b : L_.bracket(i, mem[t])) {
                  Acc* dst = next.data() + X_.local[b.index] * Pf_;
                  const Acc* src = acc.data() + t * Pf_;
                  for (std::size_t j = 0; j < Pf_; ++j) dst[j] += b.coeff * src[j];
                }
              }
            }
            acc.swap(next);
            acls = ncls;
          }
          std::size_t z0 = 0;
          while (z0 < n_ && v[z0] == 0) ++z0;
          if (z0 == n_ || li.tcls[z0] == npos) continue;
          const std::size_t vc = li.tcls[z0];
          if (acls == npos) {
            acls = vc;
            acc.assign(X_.members[vc].size() * Pf_, 0);
          } else if (acls != vc) {
            throw Error("restricted condition: inconsistent weight classes");
          }
          for (std::size_t z = 0; z < n_; ++z) {
            if (!v[z]) continue;
            for (std::size_t k : X_.members[vc]) {
              const Coeff* src = Irow(i, z, k);
              Acc* dst = acc.data() + X_.local[k] * Pf_;
              for (std::size_t j = 0; j < Pf_; ++j) dst[j] += static_cast<Acc>(v[z]) * src[j];
            }
          }
        }
        if (acls != npos) {
          if (acls != tk) throw Error("restricted condition: unexpected weight class");
          for (std::size_t t = 0; t < outm.size(); ++t)
            for (std::size_t j = 0; j < Pf_; ++j) rows[t][j] = F_.neg(static_cast<Coeff>(acc[t * Pf_ + j] % p_));
        }
        // + f(e_i^[p], s)
        const Layout& ls = layouts_.at(X_.w(s));
        for (const Term& a : pm[i]) {
          // f(a, s) = -g_s(a)
          if (ls.tcls[a.index] != tk) continue;
          for (std::size_t t = 0; t < outm.size(); ++t) {
            Coeff& r = rows[t][gidx(si, a.index, outm[t])];
            r = F_.sub(r, a.coeff);
          }
        }
        // + [omega(e_i), s]
        if (wcls_[i] != npos)
          for (std::size_t l : X_.members[wcls_[i]])
            for (const Term& t : L_.bracket(l, s)) {
              Coeff& r = rows[X_.local[t.index]][Pf_ + wbase_[i] + X_.local[l]];
              r = F_.add(r, t.coeff);
            }
        for (const Vec& r : rows) cons.add(r);
      }
  }
  const std::size_t rank_all = cons.rank();

  // transports
  {
    std::vector<std::vector<std::vector<Term>>> coef_of(S_.size(), std::vector<std::vector<Term>>(n_));
    for (std::size_t si = 0; si < S_.size(); ++si)
      for (std::size_t z = 0; z < n_; ++z)
        for (const Term& t : L_.bracket(S_[si], z))
          coef_of[si][t.index].push_back({static_cast<std::uint32_t>(z), t.coeff});
    for (const auto& [a, b] : phis) {
      Vec row(P_, 0);
      auto addf = [&](std::size_t si, std::size_t z, std::size_t k, Coeff c) {
        Coeff& r = row[gidx(si, z, k)];
        r = F_.add(r, c);
      };
      // (d phi)(s, z) = [s, phi z] - [z, phi s] - phi [s, z]
      for (std::size_t si = 0; si < S_.size(); ++si) {
        const std::size_t s = S_[si];
        for (const Term& t : L_.bracket(s, b)) addf(si, a, t.index, t.coeff);
        if (s == a)
          for (std::size_t z = 0; z < n_; ++z)
            for (const Term& t : L_.bracket(z, b)) addf(si, z, t.index, F_.neg(t.coeff));
        for (const Term& t : coef_of[si][a]) addf(si, t.index, b, F_.neg(t.coeff));
      }
      if (restricted) {
        Vec e = F_.unit(n_, b);
        for (std::uint32_t m = 0; m + 1 < p_; ++m) e = L_.ad(a, e);
        for (std::size_t k = 0; k < n_; ++k) {
          if (!e[k]) continue;
          if (wcls_[a] == npos || X_.cls[k] != wcls_[a]) throw Error("transport leaves the weight block");
          Coeff& r = row[Pf_ + wbase_[a] + X_.local[k]];
          r = F_.add(r, e[k]);
        }
        for (std::size_t i = 0; i < n_; ++i)
          for (const Term& t : (*in_.pmap)[i]) {
            if (t.index != a) continue;
            if (wcls_[i] == npos || X_.cls[b] != wcls_[i]) throw Error("transport leaves the weight block");
            Coeff& r = row[Pf_ + wbase_[i] + X_.local[b]];
            r = F_.sub(r, t.coeff);
          }
      }
      Tall.add(row);
      if (Pf_ > 0) Tf.add(std::span<const Coeff>(row.data(), Pf_));
    }
  }
  const std::size_t rank_d1 = Pf_ == 0 ? 0 : Tf.rank();
  const std::size_t rank_T = Tall.rank();

  st.h1 = phis.size() - rank_d1 - (dim_Lc - in_.center_dim);
  st.h2 = dimZ2 - rank_d1;
  if (restricted) {
    const std::size_t dimZ = P_ - rank_all;
    st.h2_restricted = dimZ - rank_T;
    {
      const SubspaceBasis Z = cons.kernel();
      const SubspaceBasis Tb = Tall.basis();
      Echelon zspan(F_, P_);
      for (const Vec& z : Z.vectors()) zspan.insert(z);
      bool closed = true;
      for (const Vec& t : Tb.vectors()) closed = closed && zspan.contains(t);
      Echelon sum(F_, P_);
      std::size_t dimBO = 0;
      const SubspaceBasis Bf = Pf_ > 0 ? Tf.basis() : SubspaceBasis{};
      for (const Vec& r : Bf.vectors()) {
        Vec x(P_, 0);
        std::copy(r.begin(), r.end(), x.begin());
        dimBO += sum.insert(std::move(x));
      }
      for (std::size_t j = Pf_; j < P_; ++j) dimBO += sum.insert(F_.unit(P_, j));
      for (const Vec& z : Z.vectors()) sum.insert(z);
      const std::size_t inter = dimZ + dimBO - sum.rank();
      st.injective = closed && inter == rank_T;

      if (in_.generators && st.h2_restricted > 0) {
        Echelon E(F_, P_);
        for (const Vec& r : Tb.vectors()) E.insert(r);
        for (const Vec& z : Z.vectors()) {
          if (!E.insert(z)) continue;
          RestrictedDeformation D;
          D.weight = in_.c;
          for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = a + 1; b < n_; ++b) {
              const std::size_t tk = X_.find(shift(shift(X_.w(a), X_.w(b)), in_.c));
              if (tk == npos) continue;
              SparseVec val;
              for (std::size_t k : X_.members[tk]) {
                const Coeff c = F_.dot(std::span<const Coeff>(Irow(a, b, k), Pf_), std::span<const Coeff>(z.data(), Pf_));
                if (c) val.push_back({static_cast<std::uint32_t>(k), c});
              }
              if (!val.empty()) D.f[{a, b}] = std::move(val);
            }
          D.omega.assign(n_, {});
          for (std::size_t i = 0; i < n_; ++i) {
            if (wcls_[i] == npos) continue;
            for (std::size_t l : X_.members[wcls_[i]])
              if (const Coeff c = z[Pf_ + wbase_[i] + X_.local[l]])
                D.omega[i].push_back({static_cast<std::uint32_t>(l), c});
          }
          out.generators.push_back(std::move(D));
        }
      }
    }
  }
  st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

BlockOutput solve_block_parametrized(const BlockInput& in) { return BlockSolver(in).run(); }

}  // namespace rlie::detail
