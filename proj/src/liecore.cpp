#include "rlie/liecore.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace rlie {

// ---------------------------------------------------------------- Grading

Weight Grading::normalize(Weight w) const {
  if (modulus > 0)
    for (auto& x : w) x = ((x % modulus) + modulus) % modulus;
  return w;
}

Weight Grading::add(const Weight& a, const Weight& b) const {
  Weight r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return normalize(std::move(r));
}

Weight Grading::sub(const Weight& a, const Weight& b) const {
  Weight r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return normalize(std::move(r));
}

Weight Grading::scale(const Weight& a, std::int64_t k) const {
  Weight r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * k;
  return normalize(std::move(r));
}

// ---------------------------------------------------------------- LieAlgebra

LieAlgebra::LieAlgebra(PrimeField F, std::vector<std::string> labels, const BracketTable& brackets)
    : F_(std::move(F)), labels_(std::move(labels)) {
  const std::size_t n = labels_.size();
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != n) throw InputError("basis labels are not unique");
  table_.assign(n * n, {});
  for (const auto& [ij, v] : brackets) {
    const auto [i, j] = ij;
    if (i >= j) throw InputError("bracket entries must have i < j");
    if (j >= n) throw InputError("bracket index out of range");
    std::vector<Term> terms(v.begin(), v.end());
    for (const auto& t : terms)
      if (t.index >= n) throw InputError("bracket component out of range");
    SparseVec s = F_.normalize(std::move(terms));
    SparseVec neg = s;
    for (auto& t : neg) t.coeff = F_.neg(t.coeff);
    table_[i * n + j] = std::move(s);
    table_[j * n + i] = std::move(neg);
  }
}

Vec LieAlgebra::ad(std::size_t i, const Vec& y) const {
  const std::size_t n = dim();
  if (y.size() != n) throw DimensionError("ad: vector has wrong length");
  std::vector<std::uint64_t> acc(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (!y[j]) continue;
    for (const auto& t : table_[i * n + j]) acc[t.index] += static_cast<std::uint64_t>(y[j]) * t.coeff;
  }
  Vec out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<Coeff>(acc[k] % F_.p());
  return out;
}

Vec LieAlgebra::ad(const SparseVec& x, const Vec& y) const {
  const std::size_t n = dim();
  if (y.size() != n) throw DimensionError("ad: vector has wrong length");
  std::vector<std::uint64_t> acc(n, 0);
  for (const auto& xi : x)
    for (std::size_t j = 0; j < n; ++j) {
      if (!y[j]) continue;
      const std::uint64_t c = static_cast<std::uint64_t>(xi.coeff) * y[j] % F_.p();
      for (const auto& t : table_[xi.index * n + j]) acc[t.index] += c * t.coeff;
    }
  Vec out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<Coeff>(acc[k] % F_.p());
  return out;
}

Vec LieAlgebra::bracket(const Vec& x, const Vec& y) const {
  if (x.size() != dim()) throw DimensionError("bracket: vector has wrong length");
  return ad(F_.to_sparse(x), y);
}

DenseMatrix LieAlgebra::ad_matrix(const Vec& x) const {
  const std::size_t n = dim();
  DenseMatrix M(n, n);
  const SparseVec xs = F_.to_sparse(x);
  for (const auto& xi : xs)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& t : table_[xi.index * n + j]) M(t.index, j) = F_.add(M(t.index, j), F_.mul(xi.coeff, t.coeff));
  return M;
}

BracketTable LieAlgebra::brackets() const {
  BracketTable out;
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!table_[i * n + j].empty()) out[{i, j}] = table_[i * n + j];
  return out;
}

void LieAlgebra::set_grading(Grading g) {
  if (g.weights.size() != dim()) throw DimensionError("grading has wrong number of weights");
  for (auto& w : g.weights) {
    if (w.size() != g.rank()) throw InputError("grading weights have inconsistent length");
    w = g.normalize(w);
  }
  if (auto v = grading_violation(*this, g)) throw InputError("grading invariant violated: " + *v);
  grading_ = std::move(g);
}

// ---------------------------------------------------------------- verification

VerificationReport verify_lie(const LieAlgebra& L, std::size_t max_failures) {
  VerificationReport rep;
  const std::size_t n = L.dim();
  const PrimeField& F = L.field();
  for (std::size_t i = 0; i < n; ++i) {
    if (!L.bracket(i, i).empty()) rep.fail("[" + L.labels()[i] + "," + L.labels()[i] + "] != 0");
    for (std::size_t j = i + 1; j < n; ++j) {
      SparseVec a = L.bracket(i, j), b = L.bracket(j, i);
      for (auto& t : b) t.coeff = F.neg(t.coeff);
      if (a != b) rep.fail("antisymmetry fails for (" + L.labels()[i] + "," + L.labels()[j] + ")");
    }
  }
  // [e_i, sum_a v_a e_a]
  auto ad_sparse = [&](std::size_t i, const SparseVec& v, std::vector<std::uint64_t>& acc) {
    for (const auto& t : v)
      for (const auto& u : L.bracket(i, t.index)) acc[u.index] += static_cast<std::uint64_t>(t.coeff) * u.coeff;
  };
  std::vector<std::uint64_t> acc(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        std::fill(acc.begin(), acc.end(), 0);
        ad_sparse(i, L.bracket(j, k), acc);
        ad_sparse(j, L.bracket(k, i), acc);
        ad_sparse(k, L.bracket(i, j), acc);
        bool bad = false;
        for (auto x : acc)
          if (x % F.p()) {
            bad = true;
            break;
          }
        if (bad) {
          rep.fail("Jacobi fails at (" + L.labels()[i] + "," + L.labels()[j] + "," + L.labels()[k] + ")");
          if (rep.failures.size() >= max_failures) return rep;
        }
      }
  return rep;
}

// ---------------------------------------------------------------- subspaces

namespace {

std::vector<SparseVec> sparse_rows(const PrimeField& F, const SubspaceBasis& S) {
  std::vector<SparseVec> out;
  for (const auto& v : S.vectors()) out.push_back(F.to_sparse(v));
  return out;
}

Vec sparse_bracket(const LieAlgebra& L, const SparseVec& x, const SparseVec& y) {
  const std::size_t n = L.dim();
  std::vector<std::uint64_t> acc(n, 0);
  const std::uint32_t p = L.p();
  for (const auto& a : x)
    for (const auto& b : y) {
      const std::uint64_t c = static_cast<std::uint64_t>(a.coeff) * b.coeff % p;
      for (const auto& t : L.bracket(a.index, b.index)) acc[t.index] += c * t.coeff;
    }
  Vec out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<Coeff>(acc[k] % p);
  return out;
}

// Row space accumulator. With a grading it keeps one echelon per weight as
// long as every inserted vector is homogeneous, and falls back to a single
// echelon on the first inhomogeneous vector.
class Accumulator {
 public:
  Accumulator(const PrimeField& F, std::size_t n, const Grading* g) : F_(F), n_(n), full_(F, n) {
    if (!g || g->weights.size() != n) return;
    graded_ = true;
    std::map<Weight, std::size_t> ids;
    block_of_.resize(n);
    local_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Weight w = g->normalize(g->weights[i]);
      auto [it, fresh] = ids.emplace(w, coords_.size());
      if (fresh) coords_.emplace_back();
      block_of_[i] = it->second;
      local_[i] = coords_[it->second].size();
      coords_[it->second].push_back(i);
    }
    for (const auto& cs : coords_) blocks_.emplace_back(F, cs.size());
  }

  std::size_t rank() const { return rank_; }

  bool insert(const Vec& v) {
    if (graded_) {
      std::size_t b = SIZE_MAX;
      bool homogeneous = true;
      for (std::size_t i = 0; i < n_ && homogeneous; ++i)
        if (v[i]) {
          if (b == SIZE_MAX) b = block_of_[i];
          else if (block_of_[i] != b) homogeneous = false;
        }
      if (b == SIZE_MAX) return false;
      if (homogeneous) {
        Vec local(coords_[b].size());
        for (std::size_t k = 0; k < local.size(); ++k) local[k] = v[coords_[b][k]];
        const bool fresh = blocks_[b].insert(std::move(local));
        rank_ += fresh;
        return fresh;
      }
      degrade();
    }
    const bool fresh = full_.insert(v);
    rank_ += fresh;
    return fresh;
  }

  SubspaceBasis basis() const {
    if (!graded_) return full_.basis();
    return SubspaceBasis::span(F_, n_, expanded());
  }

 private:
  std::vector<Vec> expanded() const {
    std::vector<Vec> out;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const SubspaceBasis B = blocks_[b].basis();
      for (const auto& r : B.vectors()) {
        Vec v(n_, 0);
        for (std::size_t k = 0; k < r.size(); ++k) v[coords_[b][k]] = r[k];
        out.push_back(std::move(v));
      }
    }
    return out;
  }
  void degrade() {
    for (auto& v : expanded()) full_.insert(std::move(v));
    graded_ = false;
    blocks_.clear();
  }

  PrimeField F_;
  std::size_t n_;
  bool graded_ = false;
  std::size_t rank_ = 0;
  std::vector<std::size_t> block_of_, local_;
  std::vector<std::vector<std::size_t>> coords_;
  std::vector<Echelon> blocks_;
  Echelon full_;
};

const Grading* grading_of(const LieAlgebra& L) { return L.grading() ? &*L.grading() : nullptr; }

// Closure of span(seeds) under the given linear maps.
template <class Apply>
SubspaceBasis spin(const PrimeField& F, std::size_t n, const Grading* g, const std::vector<Vec>& seeds,
                   std::size_t ngen, Apply apply) {
  Accumulator E(F, n, g);
  std::deque<Vec> queue;
  for (const auto& s : seeds)
    if (E.insert(s)) queue.push_back(s);
  while (!queue.empty() && E.rank() < n) {
    Vec v = std::move(queue.front());
    queue.pop_front();
    for (std::size_t k = 0; k < ngen && E.rank() < n; ++k) {
      Vec w = apply(k, v);
      if (is_zero(w)) continue;
      if (E.insert(w)) queue.push_back(std::move(w));
    }
  }
  return E.basis();
}

}  // namespace

SubspaceBasis derived_algebra(const LieAlgebra& L, const SubspaceBasis& S) {
  const PrimeField& F = L.field();
  const auto rows = sparse_rows(F, S);
  Accumulator E(F, L.dim(), grading_of(L));
  for (std::size_t a = 0; a < rows.size() && E.rank() < S.dim(); ++a)
    for (std::size_t b = a + 1; b < rows.size() && E.rank() < S.dim(); ++b) {
      Vec v = sparse_bracket(L, rows[a], rows[b]);
      if (!is_zero(v)) E.insert(v);
    }
  return E.basis();
}

std::vector<SubspaceBasis> derived_series(const LieAlgebra& L) {
  std::vector<SubspaceBasis> series{SubspaceBasis::whole(L.field(), L.dim())};
  while (true) {
    SubspaceBasis next = derived_algebra(L, series.back());
    if (next.dim() == series.back().dim()) break;
    series.push_back(std::move(next));
    if (series.back().dim() == 0) break;
  }
  return series;
}

SubspaceBasis centralizer(const LieAlgebra& L, const SubspaceBasis& S, const SubspaceBasis& T) {
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  const auto srows = sparse_rows(F, S);
  const auto trows = sparse_rows(F, T);
  // unknown t in coordinates of T; equations [sum t_a T_a, s_b] = 0, added
  // one s_b at a time until the system has full rank
  const std::size_t t = trows.size();
  Echelon E(F, t);
  for (std::size_t b = 0; b < srows.size() && E.rank() < t; ++b) {
    std::vector<Vec> rows(n, Vec(t, 0));
    std::vector<bool> used(n, false);
    for (std::size_t a = 0; a < t; ++a) {
      const Vec v = sparse_bracket(L, trows[a], srows[b]);
      for (std::size_t k = 0; k < n; ++k)
        if (v[k]) {
          rows[k][a] = v[k];
          used[k] = true;
        }
    }
    for (std::size_t k = 0; k < n && E.rank() < t; ++k)
      if (used[k]) E.insert(std::move(rows[k]));
  }
  const SubspaceBasis K = E.kernel();
  std::vector<Vec> out;
  for (const auto& k : K.vectors()) {
    Vec v(n, 0);
    for (std::size_t a = 0; a < T.dim(); ++a) F.axpy(v, k[a], T.vectors()[a]);
    out.push_back(std::move(v));
  }
  return SubspaceBasis::span(F, n, out);
}

SubspaceBasis center(const LieAlgebra& L) {
  const SubspaceBasis W = SubspaceBasis::whole(L.field(), L.dim());
  return centralizer(L, W, W);
}

SubspaceBasis ideal_spin(const LieAlgebra& L, const Vec& seed) {
  if (seed.size() != L.dim()) throw DimensionError("ideal_spin: seed has wrong length");
  if (is_zero(seed)) throw InputError("ideal_spin: seed must be nonzero");
  return spin(L.field(), L.dim(), grading_of(L), {seed}, L.dim(), [&](std::size_t g, const Vec& v) { return L.ad(g, v); });
}

SubspaceBasis ideal_generated(const LieAlgebra& L, const std::vector<Vec>& seeds) {
  for (const auto& s : seeds)
    if (s.size() != L.dim()) throw DimensionError("ideal_generated: seed has wrong length");
  return spin(L.field(), L.dim(), grading_of(L), seeds, L.dim(), [&](std::size_t g, const Vec& v) { return L.ad(g, v); });
}

SubspaceBasis generated_subalgebra(const LieAlgebra& L, const std::vector<Vec>& gens) {
  std::vector<SparseVec> sg;
  for (const auto& g : gens) sg.push_back(L.field().to_sparse(g));
  return spin(L.field(), L.dim(), grading_of(L), gens, sg.size(), [&](std::size_t g, const Vec& v) { return L.ad(sg[g], v); });
}

bool is_subalgebra(const LieAlgebra& L, const SubspaceBasis& S) {
  const auto rows = sparse_rows(L.field(), S);
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b)
      if (!S.contains(L.field(), sparse_bracket(L, rows[a], rows[b]))) return false;
  return true;
}

bool is_ideal(const LieAlgebra& L, const SubspaceBasis& S) {
  for (const auto& v : S.vectors())
    for (std::size_t i = 0; i < L.dim(); ++i)
      if (!S.contains(L.field(), L.ad(i, v))) return false;
  return true;
}

LieAlgebra subalgebra(const LieAlgebra& L, const SubspaceBasis& S) {
  const PrimeField& F = L.field();
  const auto rows = sparse_rows(F, S);
  BracketTable table;
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      const Vec v = sparse_bracket(L, rows[a], rows[b]);
      if (is_zero(v)) continue;
      // coordinates are read at the pivots; reconstructing v from the sparse
      // rows confirms membership
      SparseVec c;
      std::vector<std::uint64_t> acc(v.size(), 0);
      for (std::size_t k = 0; k < rows.size(); ++k)
        if (const Coeff x = v[S.pivots()[k]]) {
          c.push_back({static_cast<std::uint32_t>(k), x});
          for (const auto& t : rows[k]) acc[t.index] += static_cast<std::uint64_t>(x) * t.coeff;
        }
      for (std::size_t i = 0; i < v.size(); ++i)
        if (acc[i] % F.p() != v[i]) throw PreconditionError("subalgebra: subspace is not closed under the bracket");
      table[{a, b}] = std::move(c);
    }
  std::vector<std::string> labels;
  for (auto piv : S.pivots()) labels.push_back(L.labels()[piv]);
  return LieAlgebra(F, std::move(labels), table);
}

Vec quotient_coordinates(const PrimeField& F, const SubspaceBasis& I, const Vec& v) {
  const Vec r = I.reduce(F, v);
  Vec out;
  std::size_t k = 0;
  for (std::size_t c = 0; c < r.size(); ++c) {
    if (k < I.pivots().size() && I.pivots()[k] == c) {
      ++k;
      continue;
    }
    out.push_back(r[c]);
  }
  return out;
}

LieAlgebra quotient(const LieAlgebra& L, const SubspaceBasis& I) {
  const PrimeField& F = L.field();
  if (!is_ideal(L, I)) throw PreconditionError("quotient: subspace is not an ideal");
  std::vector<std::size_t> keep;
  {
    std::size_t k = 0;
    for (std::size_t c = 0; c < L.dim(); ++c) {
      if (k < I.pivots().size() && I.pivots()[k] == c) {
        ++k;
        continue;
      }
      keep.push_back(c);
    }
  }
  BracketTable table;
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = a + 1; b < keep.size(); ++b) {
      const Vec v = F.to_dense(L.bracket(keep[a], keep[b]), L.dim());
      const Vec q = quotient_coordinates(F, I, v);
      if (!is_zero(q)) table[{a, b}] = F.to_sparse(q);
    }
  std::vector<std::string> labels;
  for (auto c : keep) labels.push_back(L.labels()[c]);
  return LieAlgebra(F, std::move(labels), table);
}

// ---------------------------------------------------------------- simplicity

namespace {

Vec random_vector(const PrimeField& F, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<Coeff> d(0, F.p() - 1);
  Vec v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

// Enumerate one representative per line of the subspace spanned by K.
template <class Fn>
bool for_each_line(const PrimeField& F, const SubspaceBasis& K, Fn fn) {
  const std::size_t d = K.dim();
  const std::size_t n = K.ambient();
  // representatives: first nonzero coordinate equal to 1
  for (std::size_t lead = 0; lead < d; ++lead) {
    std::vector<Coeff> digits(d - lead - 1, 0);
    while (true) {
      Vec v = K.vectors()[lead];
      for (std::size_t t = 0; t < digits.size(); ++t) F.axpy(v, digits[t], K.vectors()[lead + 1 + t]);
      if (!fn(v)) return false;
      std::size_t t = 0;
      while (t < digits.size() && ++digits[t] == F.p()) digits[t++] = 0;
      if (t == digits.size()) break;
    }
    (void)n;
  }
  return true;
}

}  // namespace

SimplicityResult is_simple(const LieAlgebra& L, const SimplicityOptions& opts) {
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  if (n == 0) return {Simplicity::not_simple, "zero algebra"};
  if (L.brackets().empty()) return {Simplicity::not_simple, "abelian"};
  if (center(L).dim() != 0) return {Simplicity::not_simple, "nonzero center"};
  const SubspaceBasis whole = SubspaceBasis::whole(F, n);
  if (derived_algebra(L, whole).dim() != n) return {Simplicity::not_simple, "derived algebra is proper"};

  std::mt19937_64 rng(opts.seed);
  // The associative envelope of ad(L) is generated by ad(s) for any
  // generating set s of L, so spins only need a few operators. Random
  // elements usually generate; fall back to the whole basis otherwise.
  std::vector<DenseMatrix> ads;
  for (int tries = 0; tries < 3 && ads.empty(); ++tries) {
    std::vector<Vec> g;
    for (int k = 0; k < 2 + tries; ++k) g.push_back(random_vector(F, n, rng));
    if (generated_subalgebra(L, g).dim() == n)
      for (const auto& x : g) ads.push_back(L.ad_matrix(x));
  }
  if (ads.empty())
    for (std::size_t i = 0; i < n; ++i) ads.push_back(L.ad_matrix(F.unit(n, i)));
  std::vector<DenseMatrix> adsT;
  for (const auto& A : ads) adsT.push_back(A.transpose());
  auto spin_with = [&](const std::vector<DenseMatrix>& gens, const Vec& seed) {
    return spin(F, n, nullptr, {seed}, gens.size(), [&](std::size_t g, const Vec& v) { return gens[g].apply(F, v); });
  };

  // quick deterministic search for a proper ideal generated by a basis vector
  const std::size_t seeds = n <= 64 ? n : 16;
  for (std::size_t i = 0; i < seeds; ++i) {
    const std::size_t idx = (i * n) / seeds;
    const SubspaceBasis I = spin_with(ads, F.unit(n, idx));
    if (I.dim() != n)
      return {Simplicity::not_simple, "ideal generated by " + L.labels()[idx] + " has dimension " + std::to_string(I.dim())};
  }

  for (int attempt = 0; attempt < opts.attempts; ++attempt) {
    const DenseMatrix X = L.ad_matrix(random_vector(F, n, rng));
    const DenseMatrix Y = L.ad_matrix(random_vector(F, n, rng));
    const DenseMatrix Z = L.ad_matrix(random_vector(F, n, rng));
    const DenseMatrix theta0 = X.multiply(F, Y).add(F, Z);
    // pick the shift with the smallest positive nullity
    std::size_t best_null = n + 1;
    SubspaceBasis best_ker;
    DenseMatrix best_theta;
    for (Coeff lambda = 0; lambda < F.p(); ++lambda) {
      DenseMatrix th = theta0;
      for (std::size_t i = 0; i < n; ++i) th(i, i) = F.sub(th(i, i), lambda);
      SubspaceBasis K = nullspace(F, th);
      if (K.dim() > 0 && K.dim() < best_null) {
        best_null = K.dim();
        best_ker = std::move(K);
        best_theta = std::move(th);
      }
      if (best_null == 1) break;
    }
    if (best_null > n) continue;
    long double lines = 1;
    for (std::size_t t = 0; t < best_null; ++t) lines *= F.p();
    if (lines > static_cast<long double>(opts.max_lines)) continue;

    std::string proper;
    const bool all_full = for_each_line(F, best_ker, [&](const Vec& v) {
      const SubspaceBasis I = spin_with(ads, v);
      if (I.dim() != n) {
        proper = "found a proper ideal of dimension " + std::to_string(I.dim());
        return false;
      }
      return true;
    });
    if (!all_full) return {Simplicity::not_simple, proper};
    const SubspaceBasis KT = nullspace(F, best_theta.transpose());
    const SubspaceBasis D = spin_with(adsT, KT.vectors().front());
    if (D.dim() != n) return {Simplicity::not_simple, "dual module has a proper submodule"};
    return {Simplicity::simple, "Norton certificate with kernel dimension " + std::to_string(best_null)};
  }
  return {Simplicity::inconclusive, "no certificate element found within the attempt budget"};
}

// ---------------------------------------------------------------- Killing form

KillingResult killing_radical(const LieAlgebra& L) {
  const std::size_t n = L.dim();
  const PrimeField& F = L.field();
  std::vector<DenseMatrix> ads;
  for (std::size_t i = 0; i < n; ++i) ads.push_back(L.ad_matrix(F.unit(n, i)));
  DenseMatrix K(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      std::uint64_t tr = 0;
      for (std::size_t b = 0; b < n; ++b)
        for (const auto& t : L.bracket(i, b)) tr += static_cast<std::uint64_t>(t.coeff) * ads[j](b, t.index);
      K(i, j) = K(j, i) = static_cast<Coeff>(tr % F.p());
    }
  SubspaceBasis rad = nullspace(F, K);
  return {std::move(K), std::move(rad)};
}

// ---------------------------------------------------------------- gradings

std::optional<std::string> grading_violation(const LieAlgebra& L, const Grading& g) {
  const std::size_t n = L.dim();
  if (g.weights.size() != n) return "wrong number of weights";
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Weight target = g.add(g.weights[i], g.weights[j]);
      for (const auto& t : L.bracket(i, j))
        if (g.normalize(g.weights[t.index]) != target)
          return "[" + L.labels()[i] + "," + L.labels()[j] + "] has a component on " + L.labels()[t.index];
    }
  return std::nullopt;
}

TorusGrading torus_grading(const LieAlgebra& L, const std::vector<Vec>& toral) {
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  std::vector<DenseMatrix> T;
  for (std::size_t k = 0; k < toral.size(); ++k) {
    DenseMatrix A = L.ad_matrix(toral[k]);
    if (!(A.power(F, F.p()) == A))
      throw PreconditionError("toral element " + std::to_string(k) + " is not diagonalizable over F_" + std::to_string(F.p()));
    T.push_back(std::move(A));
  }
  for (std::size_t a = 0; a < T.size(); ++a)
    for (std::size_t b = a + 1; b < T.size(); ++b)
      if (!(T[a].multiply(F, T[b]) == T[b].multiply(F, T[a])))
        throw PreconditionError("toral elements " + std::to_string(a) + " and " + std::to_string(b) + " do not commute");

  bool adapted = true;
  for (const auto& A : T)
    for (std::size_t r = 0; r < n && adapted; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r != c && A(r, c)) {
          adapted = false;
          break;
        }
  Grading g;
  g.modulus = F.p();
  if (adapted) {
    for (std::size_t i = 0; i < n; ++i) {
      Weight w;
      for (const auto& A : T) w.push_back(A(i, i));
      g.weights.push_back(std::move(w));
    }
    return {L, std::move(g), false};
  }

  // joint eigenspaces, refined one operator at a time
  std::vector<std::pair<Weight, SubspaceBasis>> spaces{{Weight{}, SubspaceBasis::whole(F, n)}};
  for (const auto& A : T) {
    std::vector<std::pair<Weight, SubspaceBasis>> next;
    for (const auto& [w, V] : spaces)
      for (Coeff lambda = 0; lambda < F.p(); ++lambda) {
        DenseMatrix S = A;
        for (std::size_t i = 0; i < n; ++i) S(i, i) = F.sub(S(i, i), lambda);
        SubspaceBasis E = subspace_intersection(F, V, nullspace(F, S));
        if (E.dim() == 0) continue;
        Weight w2 = w;
        w2.push_back(lambda);
        next.emplace_back(std::move(w2), std::move(E));
      }
    spaces = std::move(next);
  }
  std::sort(spaces.begin(), spaces.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Vec> basis;
  for (const auto& [w, V] : spaces)
    for (const auto& v : V.vectors()) {
      basis.push_back(v);
      g.weights.push_back(w);
    }
  // change of basis: coordinates via solving against the new basis
  DenseMatrix B(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) B(r, c) = basis[c][r];
  BracketTable table;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const Vec v = L.bracket(basis[a], basis[b]);
      if (is_zero(v)) continue;
      Vec x;
      solve(F, B, v, x);
      table[{a, b}] = F.to_sparse(x);
    }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("t" + std::to_string(i));
  LieAlgebra R(F, std::move(labels), table);
  return {std::move(R), std::move(g), true};
}

// ---------------------------------------------------------------- generators

std::vector<std::size_t> generating_set(const LieAlgebra& L) {
  const PrimeField& F = L.field();
  const std::size_t n = L.dim();
  if (n == 0) return {};
  std::vector<std::size_t> pool;
  if (n <= 64) {
    pool.resize(n);
    std::iota(pool.begin(), pool.end(), 0);
  } else {
    for (std::size_t i = 0; i < 48; ++i) pool.push_back(i * n / 48);
    pool.push_back(n - 1);
  }
  auto gen_dim = [&](const std::vector<std::size_t>& S) {
    std::vector<Vec> g;
    for (auto s : S) g.push_back(F.unit(n, s));
    return generated_subalgebra(L, g).dim();
  };
  // start from the element whose ad has the largest image
  std::size_t first = 0, best_rank = 0;
  for (auto c : pool) {
    const std::size_t r = rank(F, L.ad_matrix(F.unit(n, c)));
    if (r > best_rank) {
      best_rank = r;
      first = c;
    }
  }
  std::vector<std::size_t> S{first};
  std::size_t have = gen_dim(S);
  while (have < n) {
    std::size_t best = n, best_dim = have;
    auto consider = [&](std::size_t c) {
      if (std::find(S.begin(), S.end(), c) != S.end()) return;
      auto T = S;
      T.push_back(c);
      const std::size_t d = gen_dim(T);
      if (d > best_dim) {
        best_dim = d;
        best = c;
      }
    };
    for (auto c : pool) consider(c);
    if (best == n)
      for (std::size_t c = 0; c < n; ++c) consider(c);
    if (best == n) break;  // cannot happen: adding basis vectors eventually spans
    S.push_back(best);
    have = best_dim;
  }
  std::sort(S.begin(), S.end());
  return S;
}

}  // namespace rlie
