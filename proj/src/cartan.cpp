#include "rlie/cartan.hpp"

#include <algorithm>
#include <functional>

namespace rlie {

// ------------------------------------------------------------ divided powers

DividedPowers::DividedPowers(std::uint32_t p, std::vector<std::uint32_t> n) : F_(p), n_(std::move(n)) {
  if (n_.empty()) throw InputError("divided powers need at least one variable");
  bounds_.resize(n_.size());
  strides_.resize(n_.size());
  for (std::size_t i = n_.size(); i-- > 0;) {
    if (n_[i] == 0) throw InputError("truncation exponents n_i must be at least 1");
    std::uint64_t b = 1;
    for (std::uint32_t k = 0; k < n_[i]; ++k) {
      b *= p;
      if (b > (1u << 16)) throw ResourceError("divided power algebra too large");
    }
    bounds_[i] = b;
    strides_[i] = size_;
    size_ *= b;
    if (size_ > (1u << 16)) throw ResourceError("divided power algebra too large");
  }
  exps_.resize(size_);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    std::vector<std::uint64_t> a(n_.size());
    for (std::size_t i = 0; i < n_.size(); ++i) a[i] = (idx / strides_[i]) % bounds_[i];
    exps_[idx] = std::move(a);
  }
}

std::size_t DividedPowers::index(const std::vector<std::uint64_t>& a) const {
  if (a.size() != m()) throw InputError("exponent has the wrong number of variables");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= bounds_[i]) throw InputError("exponent exceeds the truncation bound");
    idx += a[i] * strides_[i];
  }
  return idx;
}

std::uint64_t DividedPowers::degree(std::size_t idx) const {
  std::uint64_t d = 0;
  for (auto v : exps_[idx]) d += v;
  return d;
}

std::string DividedPowers::label(std::size_t idx) const {
  std::string s = "x(";
  for (std::size_t i = 0; i < m(); ++i) {
    if (i) s += ",";
    s += std::to_string(exps_[idx][i]);
  }
  return s + ")";
}

namespace {

// x^(a) x^(b); returns false when the product vanishes
bool mono_mul(const DividedPowers& O, std::size_t a, std::size_t b, std::size_t& out, Coeff& c) {
  const auto& ea = O.exponent(a);
  const auto& eb = O.exponent(b);
  c = 1;
  for (std::size_t i = 0; i < O.m(); ++i) {
    const std::uint64_t s = ea[i] + eb[i];
    if (s >= O.bound(i)) return false;
    c = O.field().mul(c, binomial_mod(s, ea[i], O.p()));
    if (c == 0) return false;
  }
  out = a + b;
  return true;
}

void check_element(const DividedPowers& O, const DPElement& f) {
  for (const auto& t : f)
    if (t.index >= O.size()) throw DimensionError("monomial index out of range");
}

}  // namespace

DPElement dp_monomial(const DividedPowers& O, const std::vector<std::uint64_t>& a, Coeff c) {
  c %= O.p();
  if (c == 0) return {};
  return {Term{static_cast<std::uint32_t>(O.index(a)), c}};
}

DPElement dp_multiply(const DividedPowers& O, const DPElement& a, const DPElement& b) {
  check_element(O, a);
  check_element(O, b);
  const PrimeField& F = O.field();
  std::vector<Term> out;
  for (const auto& s : a)
    for (const auto& t : b) {
      std::size_t idx;
      Coeff c;
      if (mono_mul(O, s.index, t.index, idx, c))
        out.push_back({static_cast<std::uint32_t>(idx), F.mul(c, F.mul(s.coeff, t.coeff))});
    }
  return F.normalize(std::move(out));
}

DPElement dp_partial(const DividedPowers& O, std::size_t i, const DPElement& f) {
  if (i >= O.m()) throw DimensionError("partial derivative index out of range");
  check_element(O, f);
  DPElement out;
  for (const auto& t : f)
    if (O.exponent(t.index)[i] > 0) out.push_back({static_cast<std::uint32_t>(t.index - O.stride(i)), t.coeff});
  return out;
}

DPElement dp_add(const DividedPowers& O, const DPElement& a, const DPElement& b) {
  std::vector<Term> t(a);
  t.insert(t.end(), b.begin(), b.end());
  return O.field().normalize(std::move(t));
}

DPElement dp_scale(const DividedPowers& O, const DPElement& a, Coeff c) {
  const PrimeField& F = O.field();
  c %= O.p();
  if (c == 0) return {};
  DPElement out(a);
  for (auto& t : out) t.coeff = F.mul(t.coeff, c);
  return out;
}

// ------------------------------------------------------- special derivations

SpecialDerivation partial_derivation(const DividedPowers& O, std::size_t i) {
  if (i >= O.m()) throw DimensionError("partial derivative index out of range");
  SpecialDerivation D{std::vector<DPElement>(O.m())};
  D.coeffs[i] = {Term{0, 1}};
  return D;
}

namespace {

void check_derivation(const DividedPowers& O, const SpecialDerivation& D) {
  if (D.coeffs.size() != O.m()) throw DimensionError("special derivation has the wrong number of components");
}

}  // namespace

DPElement apply(const DividedPowers& O, const SpecialDerivation& D, const DPElement& f) {
  check_derivation(O, D);
  DPElement out;
  for (std::size_t i = 0; i < O.m(); ++i) {
    if (D.coeffs[i].empty()) continue;
    out = dp_add(O, out, dp_multiply(O, D.coeffs[i], dp_partial(O, i, f)));
  }
  return out;
}

SpecialDerivation bracket(const DividedPowers& O, const SpecialDerivation& D, const SpecialDerivation& E) {
  check_derivation(O, D);
  check_derivation(O, E);
  SpecialDerivation out{std::vector<DPElement>(O.m())};
  for (std::size_t j = 0; j < O.m(); ++j)
    out.coeffs[j] = dp_add(O, apply(O, D, E.coeffs[j]), dp_scale(O, apply(O, E, D.coeffs[j]), O.p() - 1));
  return out;
}

DPElement divergence(const DividedPowers& O, const SpecialDerivation& D) {
  check_derivation(O, D);
  DPElement out;
  for (std::size_t i = 0; i < O.m(); ++i) out = dp_add(O, out, dp_partial(O, i, D.coeffs[i]));
  return out;
}

SpecialDerivation multiply(const DividedPowers& O, const DPElement& f, const SpecialDerivation& D) {
  check_derivation(O, D);
  SpecialDerivation out{std::vector<DPElement>(O.m())};
  for (std::size_t i = 0; i < O.m(); ++i) out.coeffs[i] = dp_multiply(O, f, D.coeffs[i]);
  return out;
}

Vec to_witt_coordinates(const DividedPowers& O, const SpecialDerivation& D) {
  check_derivation(O, D);
  Vec v(O.size() * O.m(), 0);
  for (std::size_t i = 0; i < O.m(); ++i)
    for (const auto& t : D.coeffs[i]) v[t.index * O.m() + i] = t.coeff;
  return v;
}

SpecialDerivation from_witt_coordinates(const DividedPowers& O, const Vec& v) {
  if (v.size() != O.size() * O.m()) throw DimensionError("vector is not in W(m;n) coordinates");
  SpecialDerivation D{std::vector<DPElement>(O.m())};
  for (std::size_t q = 0; q < v.size(); ++q)
    if (v[q]) D.coeffs[q % O.m()].push_back({static_cast<std::uint32_t>(q / O.m()), v[q]});
  return D;
}

SpecialDerivation composition_power(const DividedPowers& O, const SpecialDerivation& D) {
  check_derivation(O, D);
  for (auto k : O.n())
    if (k != 1) throw PreconditionError("composition power as a special derivation needs n = (1,...,1)");
  SpecialDerivation out{std::vector<DPElement>(O.m())};
  for (std::size_t j = 0; j < O.m(); ++j) {
    std::vector<std::uint64_t> e(O.m(), 0);
    e[j] = 1;
    DPElement g = dp_monomial(O, e);
    for (std::uint32_t k = 0; k < O.p() && !g.empty(); ++k) g = apply(O, D, g);
    out.coeffs[j] = std::move(g);
  }
  return out;
}

// ---------------------------------------------------------- differential forms

bool DifferentialForm::is_zero() const {
  for (const auto& [k, f] : terms)
    if (!f.empty()) return false;
  return true;
}

namespace {

void add_term(const DividedPowers& O, DifferentialForm& w, std::vector<std::uint32_t> idx, const DPElement& f) {
  if (f.empty()) return;
  // sort with sign, zero on repeated index
  int sign = 1;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j + 1 < idx.size() - i; ++j) {
      if (idx[j] == idx[j + 1]) return;
      if (idx[j] > idx[j + 1]) {
        std::swap(idx[j], idx[j + 1]);
        sign = -sign;
      }
    }
  for (std::size_t j = 0; j + 1 < idx.size(); ++j)
    if (idx[j] == idx[j + 1]) return;
  DPElement& slot = w.terms[idx];
  slot = dp_add(O, slot, sign > 0 ? f : dp_scale(O, f, O.p() - 1));
  if (slot.empty()) w.terms.erase(idx);
}

DPElement var(const DividedPowers& O, std::size_t i) {
  std::vector<std::uint64_t> e(O.m(), 0);
  e[i] = 1;
  return dp_monomial(O, e);
}

}  // namespace

DifferentialForm exterior_derivative(const DividedPowers& O, const DPElement& f) {
  DifferentialForm w;
  w.degree = 1;
  for (std::uint32_t k = 0; k < O.m(); ++k) add_term(O, w, {k}, dp_partial(O, k, f));
  return w;
}

DifferentialForm form_multiply(const DividedPowers& O, const DPElement& f, const DifferentialForm& w) {
  DifferentialForm out;
  out.degree = w.degree;
  for (const auto& [idx, g] : w.terms) add_term(O, out, idx, dp_multiply(O, f, g));
  return out;
}

DifferentialForm lie_derivative(const DividedPowers& O, const SpecialDerivation& D, const DifferentialForm& w) {
  check_derivation(O, D);
  DifferentialForm out;
  out.degree = w.degree;
  for (const auto& [idx, f] : w.terms) {
    add_term(O, out, idx, apply(O, D, f));
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const DPElement& g = D.coeffs[idx[j]];
      if (g.empty()) continue;
      for (std::uint32_t k = 0; k < O.m(); ++k) {
        const DPElement dg = dp_partial(O, k, g);
        if (dg.empty()) continue;
        std::vector<std::uint32_t> t = idx;
        t[j] = k;
        add_term(O, out, std::move(t), dp_multiply(O, f, dg));
      }
    }
  }
  return out;
}

DifferentialForm special_form(const DividedPowers& O) {
  DifferentialForm w;
  w.degree = O.m();
  std::vector<std::uint32_t> idx(O.m());
  for (std::uint32_t i = 0; i < O.m(); ++i) idx[i] = i;
  w.terms[idx] = {Term{0, 1}};
  return w;
}

DifferentialForm hamiltonian_form(const DividedPowers& O) {
  if (O.m() % 2 != 0 || O.m() == 0) throw InputError("the Hamiltonian form needs an even number of variables");
  const std::uint32_t r = static_cast<std::uint32_t>(O.m() / 2);
  DifferentialForm w;
  w.degree = 2;
  for (std::uint32_t i = 0; i < r; ++i) w.terms[{i, i + r}] = {Term{0, 1}};
  return w;
}

DifferentialForm contact_form(const DividedPowers& O) {
  if (O.m() % 2 != 1 || O.m() < 3) throw InputError("the contact form needs an odd number of variables, at least 3");
  const std::uint32_t r = static_cast<std::uint32_t>(O.m() / 2);
  DifferentialForm w;
  w.degree = 1;
  for (std::uint32_t i = 0; i < r; ++i) {
    add_term(O, w, {i + r}, var(O, i));
    add_term(O, w, {i}, dp_scale(O, var(O, i + r), O.p() - 1));
  }
  add_term(O, w, {2 * r}, {Term{0, 1}});
  return w;
}

// -------------------------------------------------------------- the families

std::string to_string(CartanFamily f) {
  switch (f) {
    case CartanFamily::W: return "W";
    case CartanFamily::S: return "S";
    case CartanFamily::H: return "H";
    case CartanFamily::K: return "K";
    case CartanFamily::M: return "M";
  }
  return "?";
}

RestrictedLieAlgebra CartanAlgebra::as_restricted() const {
  if (pmap.empty()) throw PreconditionError(to_string(family) + " algebra with this n carries no p-map");
  return RestrictedLieAlgebra{lie, pmap};
}

namespace {

using WeightFn = std::function<Weight(const std::vector<std::uint64_t>&)>;

// Z^m: x_i has weight e_i
Weight standard_weight(const std::vector<std::uint64_t>& a) {
  Weight w(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) w[i] = static_cast<std::int64_t>(a[i]);
  return w;
}

// Z^{r+1}: x_i -> e_i, x_{i+r} -> e_0 - e_i
Weight hamiltonian_weight(const std::vector<std::uint64_t>& a) {
  const std::size_t r = a.size() / 2;
  Weight w(r + 1, 0);
  for (std::size_t i = 0; i < r; ++i) {
    w[i + 1] += static_cast<std::int64_t>(a[i]) - static_cast<std::int64_t>(a[i + r]);
    w[0] += static_cast<std::int64_t>(a[i + r]);
  }
  return w;
}

// Z^{r+1}: x_i -> e_0 + e_i, x_{i+r} -> e_0 - e_i, x_{2r+1} -> 2 e_0
Weight contact_weight(const std::vector<std::uint64_t>& a) {
  const std::size_t r = a.size() / 2;
  Weight w(r + 1, 0);
  for (std::size_t i = 0; i < r; ++i) {
    w[0] += static_cast<std::int64_t>(a[i] + a[i + r]);
    w[i + 1] += static_cast<std::int64_t>(a[i]) - static_cast<std::int64_t>(a[i + r]);
  }
  w[0] += 2 * static_cast<std::int64_t>(a[2 * r]);
  return w;
}

Weight witt_weight(const DividedPowers& O, const WeightFn& wf, std::size_t mono, std::size_t i) {
  Weight w = wf(O.exponent(mono));
  std::vector<std::uint64_t> e(O.m(), 0);
  e[i] = 1;
  const Weight wi = wf(e);
  for (std::size_t k = 0; k < w.size(); ++k) w[k] -= wi[k];
  return w;
}

std::string witt_label(const DividedPowers& O, std::size_t q) {
  return O.label(q / O.m()) + "d" + std::to_string(q % O.m() + 1);
}

// [x^(a) d_i, x^(b) d_j] = x^(a) x^(b - e_i) d_j - x^(b) x^(a - e_j) d_i
SparseVec witt_bracket(const DividedPowers& O, std::size_t qa, std::size_t qb) {
  const std::size_t m = O.m();
  const std::size_t a = qa / m, i = qa % m, b = qb / m, j = qb % m;
  const PrimeField& F = O.field();
  std::vector<Term> out;
  std::size_t idx;
  Coeff c;
  if (O.exponent(b)[i] > 0 && mono_mul(O, a, b - O.stride(i), idx, c))
    out.push_back({static_cast<std::uint32_t>(idx * m + j), c});
  if (O.exponent(a)[j] > 0 && mono_mul(O, b, a - O.stride(j), idx, c))
    out.push_back({static_cast<std::uint32_t>(idx * m + i), F.neg(c)});
  return F.normalize(std::move(out));
}

LieAlgebra witt_lie(const DividedPowers& O, const WeightFn& wf) {
  const std::size_t N = O.size() * O.m();
  if (N > 4096) throw ResourceError("W(m;n) of dimension " + std::to_string(N) + " exceeds the supported size");
  std::vector<std::string> labels(N);
  for (std::size_t q = 0; q < N; ++q) labels[q] = witt_label(O, q);
  BracketTable t;
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = a + 1; b < N; ++b) {
      SparseVec v = witt_bracket(O, a, b);
      if (!v.empty()) t.emplace(std::make_pair(a, b), std::move(v));
    }
  LieAlgebra L(O.field(), std::move(labels), t);
  Grading g;
  for (std::size_t q = 0; q < N; ++q) g.weights.push_back(witt_weight(O, wf, q / O.m(), q % O.m()));
  L.set_grading(std::move(g));
  return L;
}

std::vector<std::uint32_t> resolve_n(std::size_t m, const std::vector<std::uint32_t>& n) {
  if (m == 0) throw InputError("the number of variables must be positive");
  if (n.empty()) return std::vector<std::uint32_t>(m, 1);
  if (n.size() != m) throw InputError("n must have one entry per variable");
  return n;
}

bool all_ones(const DividedPowers& O) {
  return std::all_of(O.n().begin(), O.n().end(), [](auto k) { return k == 1; });
}

std::string join(const std::vector<std::uint32_t>& n) {
  std::string s;
  for (std::size_t i = 0; i < n.size(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
  return s;
}

void finish(CartanAlgebra& A, const CartanOptions& o) {
  A.lie.set_provenance("family", to_string(A.family));
  A.lie.set_provenance("m", std::to_string(A.O.m()));
  A.lie.set_provenance("n", join(A.O.n()));
  A.lie.set_provenance("p", std::to_string(A.O.p()));
  if (!o.verify) return;
  const auto lr = verify_lie(A.lie);
  if (!lr.ok) throw Error(to_string(A.family) + " construction fails the Lie axioms: " + lr.failures.front());
  if (A.restricted()) {
    const auto rr = verify_restricted(A.lie, A.pmap);
    if (!rr.ok) throw Error(to_string(A.family) + " p-map fails verification: " + rr.failures.front());
  }
}

// p-map of a subalgebra of W(m;1) given by an RREF basis in W coordinates
std::vector<Vec> subalgebra_pmap(const DividedPowers& O, const PrimeField& F, const SubspaceBasis& E) {
  std::vector<Vec> out;
  for (const auto& v : E.vectors()) {
    const Vec w = to_witt_coordinates(O, composition_power(O, from_witt_coordinates(O, v)));
    if (!E.contains(F, w)) throw Error("subalgebra of W(m;1) is not closed under p-th powers");
    Vec c(E.dim());
    for (std::size_t k = 0; k < E.dim(); ++k) c[k] = w[E.pivots()[k]];
    out.push_back(std::move(c));
  }
  return out;
}

// Kernel of D -> L_D w (columns: W basis) with optional multiplier columns
// -g w (K family); returns the projection onto the W part.
SubspaceBasis form_condition(const DividedPowers& O, const DifferentialForm& w, bool multiplier) {
  const PrimeField& F = O.field();
  const std::size_t N = O.size() * O.m();
  const std::size_t cols = N + (multiplier ? O.size() : 0);
  std::map<std::pair<std::vector<std::uint32_t>, std::uint32_t>, std::size_t> row_id;
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Coeff>> entries;
  auto emit = [&](const DifferentialForm& f, std::size_t col, bool negate) {
    for (const auto& [idx, g] : f.terms)
      for (const auto& t : g) {
        auto it = row_id.try_emplace({idx, t.index}, row_id.size()).first;
        entries.push_back({{it->second, col}, negate ? F.neg(t.coeff) : t.coeff});
      }
  };
  for (std::size_t q = 0; q < N; ++q) {
    SpecialDerivation D{std::vector<DPElement>(O.m())};
    D.coeffs[q % O.m()] = {Term{static_cast<std::uint32_t>(q / O.m()), 1}};
    emit(lie_derivative(O, D, w), q, false);
  }
  if (multiplier)
    for (std::size_t g = 0; g < O.size(); ++g)
      emit(form_multiply(O, {Term{static_cast<std::uint32_t>(g), 1}}, w), N + g, true);
  const SubspaceBasis K = nullspace(F, SparseMatrix(F, row_id.size(), cols, std::move(entries)));
  if (!multiplier) return K;
  std::vector<Vec> proj;
  for (const auto& v : K.vectors()) proj.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(N));
  return SubspaceBasis::span(F, N, proj);
}

CartanAlgebra form_family(CartanFamily fam, std::size_t m, const std::vector<std::uint32_t>& n, std::uint32_t p,
                          const CartanOptions& o) {
  if (p <= 3) throw InputError(to_string(fam) + " algebras are built for p > 3");
  DividedPowers O(p, resolve_n(m, n));
  const PrimeField& F = O.field();
  WeightFn wf = standard_weight;
  DifferentialForm w;
  int depth = 1;
  switch (fam) {
    case CartanFamily::S:
      w = special_form(O);
      break;
    case CartanFamily::H:
      w = hamiltonian_form(O);
      wf = hamiltonian_weight;
      depth = 2;
      break;
    case CartanFamily::K:
      w = contact_form(O);
      wf = contact_weight;
      break;
    default:
      throw InputError("not a form family");
  }
  const LieAlgebra W = witt_lie(O, wf);
  SubspaceBasis X = form_condition(O, w, fam == CartanFamily::K);
  for (int k = 0; k < depth; ++k) X = derived_algebra(W, X);
  LieAlgebra lie = subalgebra(W, X);
  Grading g;
  for (auto q : X.pivots()) g.weights.push_back(W.grading()->weights[q]);
  lie.set_grading(std::move(g));
  std::vector<Vec> pm;
  if (all_ones(O)) pm = subalgebra_pmap(O, F, X);
  CartanAlgebra A{fam, O, std::move(lie), std::move(pm), std::move(X)};
  A.lie.set_provenance("construction", "derived algebra of the form-preserving derivations, depth " +
                                           std::to_string(depth));
  finish(A, o);
  return A;
}

}  // namespace

CartanAlgebra witt(std::size_t m, const std::vector<std::uint32_t>& n, std::uint32_t p, const CartanOptions& o) {
  DividedPowers O(p, resolve_n(m, n));
  const PrimeField& F = O.field();
  LieAlgebra lie = witt_lie(O, standard_weight);
  const std::size_t N = lie.dim();
  std::vector<Vec> pm;
  if (all_ones(O))
    for (std::size_t q = 0; q < N; ++q)
      pm.push_back(to_witt_coordinates(O, composition_power(O, from_witt_coordinates(O, F.unit(N, q)))));
  CartanAlgebra A{CartanFamily::W, O, std::move(lie), std::move(pm), SubspaceBasis::whole(F, N)};
  finish(A, o);
  return A;
}

CartanAlgebra special(std::size_t m, const std::vector<std::uint32_t>& n, std::uint32_t p, const CartanOptions& o) {
  if (m < 3) throw InputError("S(m;n) needs m >= 3");
  return form_family(CartanFamily::S, m, n, p, o);
}

CartanAlgebra hamiltonian(std::size_t two_r, const std::vector<std::uint32_t>& n, std::uint32_t p,
                          const CartanOptions& o) {
  if (two_r < 2 || two_r % 2 != 0) throw InputError("H(2r;n) needs an even number of variables 2r >= 2");
  auto A = form_family(CartanFamily::H, two_r, n, p, o);
  A.lie.set_provenance("r", std::to_string(two_r / 2));
  return A;
}

CartanAlgebra contact(std::size_t two_r_plus_1, const std::vector<std::uint32_t>& n, std::uint32_t p,
                      const CartanOptions& o) {
  if (two_r_plus_1 < 3 || two_r_plus_1 % 2 != 1)
    throw InputError("K(2r+1;n) needs an odd number of variables 2r+1 >= 3");
  auto A = form_family(CartanFamily::K, two_r_plus_1, n, p, o);
  A.lie.set_provenance("r", std::to_string(two_r_plus_1 / 2));
  return A;
}

// ------------------------------------------------------------------ Melikian

namespace {

struct MelikianElement {
  DPElement f;
  SpecialDerivation D, T;  // W part and W~ part
};

}  // namespace

CartanAlgebra melikian(std::uint32_t n1, std::uint32_t n2, std::uint32_t p, const CartanOptions& o) {
  if (p != 5) throw InputError("the Melikian algebra is defined only in characteristic p = 5 (got p = " +
                               std::to_string(p) + ")");
  DividedPowers O(p, {n1, n2});
  const PrimeField& F = O.field();
  const std::size_t N = O.size();
  const std::size_t dim = 5 * N;
  if (dim > 4096) throw ResourceError("Melikian algebra exceeds the supported size");
  const Coeff two = 2, minus_two = F.neg(2);

  auto zero_der = [&] { return SpecialDerivation{std::vector<DPElement>(2)}; };
  auto element = [&](std::size_t q) {
    MelikianElement e{{}, zero_der(), zero_der()};
    if (q < N) {
      e.f = {Term{static_cast<std::uint32_t>(q), 1}};
    } else if (q < 3 * N) {
      const std::size_t r = q - N;
      e.D.coeffs[r % 2] = {Term{static_cast<std::uint32_t>(r / 2), 1}};
    } else {
      const std::size_t r = q - 3 * N;
      e.T.coeffs[r % 2] = {Term{static_cast<std::uint32_t>(r / 2), 1}};
    }
    return e;
  };
  auto coords = [&](const MelikianElement& e) {
    std::vector<Term> t;
    for (const auto& s : e.f) t.push_back(s);
    for (std::size_t i = 0; i < 2; ++i) {
      for (const auto& s : e.D.coeffs[i]) t.push_back({static_cast<std::uint32_t>(N + 2 * s.index + i), s.coeff});
      for (const auto& s : e.T.coeffs[i]) t.push_back({static_cast<std::uint32_t>(3 * N + 2 * s.index + i), s.coeff});
    }
    return F.normalize(std::move(t));
  };
  auto add_der = [&](const SpecialDerivation& a, const SpecialDerivation& b) {
    SpecialDerivation s = zero_der();
    for (std::size_t i = 0; i < 2; ++i) s.coeffs[i] = dp_add(O, a.coeffs[i], b.coeffs[i]);
    return s;
  };
  // [D, f] = D(f) - 2 div(D) f
  auto der_on_function = [&](const SpecialDerivation& D, const DPElement& f) {
    return dp_add(O, apply(O, D, f), dp_scale(O, dp_multiply(O, divergence(O, D), f), minus_two));
  };
  auto part = [&](std::size_t q) { return q < N ? 0 : (q < 3 * N ? 1 : 2); };

  std::vector<std::string> labels(dim);
  for (std::size_t q = 0; q < dim; ++q) {
    if (q < N) labels[q] = O.label(q);
    else if (q < 3 * N) labels[q] = O.label((q - N) / 2) + "d" + std::to_string((q - N) % 2 + 1);
    else labels[q] = O.label((q - 3 * N) / 2) + "d" + std::to_string((q - 3 * N) % 2 + 1) + "~";
  }

  BracketTable table;
  for (std::size_t a = 0; a < dim; ++a) {
    const MelikianElement x = element(a);
    for (std::size_t b = a + 1; b < dim; ++b) {
      const MelikianElement y = element(b);
      MelikianElement r{{}, zero_der(), zero_der()};
      const int pa = part(a), pb = part(b);
      if (pa == 0 && pb == 0) {
        // [f,g] = 2(g D2 f - f D2 g) D1~ + 2(f D1 g - g D1 f) D2~
        const DPElement& f = x.f;
        const DPElement& g = y.f;
        r.T.coeffs[0] = dp_scale(O,
                                 dp_add(O, dp_multiply(O, g, dp_partial(O, 1, f)),
                                        dp_scale(O, dp_multiply(O, f, dp_partial(O, 1, g)), F.neg(1))),
                                 two);
        r.T.coeffs[1] = dp_scale(O,
                                 dp_add(O, dp_multiply(O, f, dp_partial(O, 0, g)),
                                        dp_scale(O, dp_multiply(O, g, dp_partial(O, 0, f)), F.neg(1))),
                                 two);
      } else if (pa == 0 && pb == 1) {
        r.f = dp_scale(O, der_on_function(y.D, x.f), F.neg(1));
      } else if (pa == 0 && pb == 2) {
        r.D = multiply(O, x.f, y.T);
      } else if (pa == 1 && pb == 1) {
        r.D = bracket(O, x.D, y.D);
      } else if (pa == 1 && pb == 2) {
        // [D, E~] = [D,E]~ + 2 div(D) E~
        r.T = add_der(bracket(O, x.D, y.T), multiply(O, dp_scale(O, divergence(O, x.D), two), y.T));
      } else {
        // [f1 D1~ + f2 D2~, g1 D1~ + g2 D2~] = f1 g2 - f2 g1
        r.f = dp_add(O, dp_multiply(O, x.T.coeffs[0], y.T.coeffs[1]),
                     dp_scale(O, dp_multiply(O, x.T.coeffs[1], y.T.coeffs[0]), F.neg(1)));
      }
      SparseVec v = coords(r);
      if (!v.empty()) table.emplace(std::make_pair(a, b), std::move(v));
    }
  }
  LieAlgebra lie(F, std::move(labels), table);

  // toral pair x1 d1, x2 d2 of the W part
  std::vector<Vec> toral;
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<std::uint64_t> e(2, 0);
    e[i] = 1;
    toral.push_back(F.unit(dim, N + 2 * O.index(e) + i));
  }
  TorusGrading tg = torus_grading(lie, toral);
  if (tg.rebased) throw Error("Melikian basis is not a torus eigenbasis");
  lie.set_grading(tg.grading);

  std::vector<Vec> pm;
  if (n1 == 1 && n2 == 1) {
    auto images = induced_pmap(lie);
    if (!images) throw Error("M(1,1) carries no induced p-map");
    pm = std::move(*images);
  }
  CartanAlgebra A{CartanFamily::M, O, std::move(lie), std::move(pm), SubspaceBasis()};
  A.lie.set_provenance("grading", "torus x(1,0)d1, x(0,1)d2");
  finish(A, o);
  return A;
}

// ----------------------------------------------------------------- envelope

CartanEnvelope cartan_p_envelope(const CartanAlgebra& X) {
  const PrimeField& F = X.lie.field();
  const std::size_t n = X.lie.dim();
  if (X.restricted()) {
    Envelope e{X.as_restricted(), {}};
    for (std::size_t i = 0; i < n; ++i) e.ad.push_back(F.unit(n, i));
    const std::size_t md = minimal_p_envelope(X.lie).algebra.lie.dim();
    return CartanEnvelope{std::move(e), {}, md, md == n};
  }
  if (X.family == CartanFamily::M)
    throw PreconditionError("the iterated-power formula applies to the W, S, H and K families");
  const DividedPowers& O = X.O;

  std::vector<std::string> adjoined;
  // d_i^{p^j} acting on X, columns in X coordinates
  std::vector<SparseMatrix> extra;
  for (std::size_t i = 0; i < O.m(); ++i) {
    std::uint64_t step = 1;
    for (std::uint32_t j = 1; j < O.n()[i]; ++j) {
      step *= O.p();
      std::vector<std::pair<std::pair<std::size_t, std::size_t>, Coeff>> entries;
      for (std::size_t b = 0; b < n; ++b) {
        const Vec& v = X.embedding.vectors()[b];
        Vec img(v.size(), 0);
        for (std::size_t q = 0; q < v.size(); ++q) {
          if (!v[q]) continue;
          const std::size_t mono = q / O.m();
          if (O.exponent(mono)[i] < step) continue;
          img[(mono - step * O.stride(i)) * O.m() + q % O.m()] = v[q];
        }
        if (!X.embedding.contains(F, img))
          throw Error("d" + std::to_string(i + 1) + "^" + std::to_string(step) + " does not preserve the algebra");
        for (std::size_t k = 0; k < n; ++k)
          if (const Coeff c = img[X.embedding.pivots()[k]]) entries.push_back({{k, b}, c});
      }
      extra.emplace_back(F, n, n, std::move(entries));
      adjoined.push_back("d" + std::to_string(i + 1) + "^" + std::to_string(step));
    }
  }

  std::vector<SparseMatrix> gens;
  for (std::size_t i = 0; i < n; ++i) gens.push_back(sparse_ad_matrix(X.lie, i));
  for (const auto& P : extra) gens.push_back(P);
  const std::size_t d = gens.size();
  MatrixClosureOptions opts;
  opts.assume_subalgebra = true;
  const MatrixLieAlgebra A = matrix_lie_algebra(F, n, gens, opts);
  if (A.space.dim() != d) throw Error("adjoined derivations are not independent of ad X");
  if (A.pmap.empty()) throw Error("X plus the iterated powers is not closed under p-th powers");

  // change of basis from the RREF basis of A to the generator basis
  DenseMatrix C(d, d);
  for (std::size_t a = 0; a < d; ++a) {
    const Vec v = vectorize(gens[a]);
    for (std::size_t k = 0; k < d; ++k) C(k, a) = v[A.space.pivots()[k]];
  }
  const auto inv = inverse(F, C);
  if (!inv) throw Error("envelope generators are linearly dependent");
  const DenseMatrix& Cinv = *inv;
  auto to_gens = [&](const Vec& rref) { return Cinv.apply(F, rref); };

  std::vector<std::string> labels;
  for (const auto& l : X.lie.labels()) labels.push_back("ad(" + l + ")");
  for (const auto& l : adjoined) labels.push_back(l);
  BracketTable t;
  auto lift = [&](const Vec& xv) {
    SparseVec s;
    for (std::size_t k = 0; k < n; ++k)
      if (xv[k]) s.push_back({static_cast<std::uint32_t>(k), xv[k]});
    return s;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (!X.lie.bracket(a, b).empty()) t.emplace(std::make_pair(a, b), X.lie.bracket(a, b));
  for (std::size_t q = 0; q < extra.size(); ++q) {
    const DenseMatrix P = extra[q].to_dense();
    for (std::size_t a = 0; a < n; ++a) {
      // [ad x_a, P] = -ad(P x_a)
      Vec col(n);
      for (std::size_t k = 0; k < n; ++k) col[k] = F.neg(P(k, a));
      SparseVec s = lift(col);
      if (!s.empty()) t.emplace(std::make_pair(a, n + q), std::move(s));
    }
  }
  LieAlgebra lie(F, std::move(labels), t);
  std::vector<Vec> pm;
  for (std::size_t a = 0; a < d; ++a) {
    const Vec v = vectorize(matrix_power(F, gens[a], F.p()));
    Vec c(d);
    for (std::size_t k = 0; k < d; ++k) c[k] = v[A.space.pivots()[k]];
    pm.push_back(to_gens(c));
  }
  for (const auto& [k, v] : X.lie.provenance()) lie.set_provenance(k, v);
  lie.set_provenance("envelope", "adjoined iterated powers of the partial derivatives");
  Envelope e{RestrictedLieAlgebra{std::move(lie), std::move(pm)}, {}};
  for (std::size_t i = 0; i < n; ++i) e.ad.push_back(F.unit(d, i));
  const std::size_t md = minimal_p_envelope(X.lie).algebra.lie.dim();
  return CartanEnvelope{std::move(e), std::move(adjoined), md, md == d};
}

}  // namespace rlie
