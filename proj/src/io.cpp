#include "rlie/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "rlie/errors.hpp"

namespace rlie {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string terms_text(const SparseVec& v) {
  std::string s = "[";
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (t) s += ", ";
    s += "[" + std::to_string(v[t].index) + ", " + std::to_string(v[t].coeff) + "]";
  }
  return s + "]";
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) throw InputError(where + ": unknown field \"" + it.key() + "\"");
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::uint64_t as_uint(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw InputError(where + ": expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::int64_t as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw InputError(where + ": expected an integer");
  return v.get<std::int64_t>();
}

const json& as_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw InputError(where + ": expected an array");
  return v;
}

// [[k, c], ...] with strictly increasing k < n and 0 < c < p
SparseVec parse_terms(const json& v, std::size_t n, std::uint32_t p, const std::string& where) {
  SparseVec out;
  const json& arr = as_array(v, where);
  for (std::size_t t = 0; t < arr.size(); ++t) {
    const std::string at = where + "[" + std::to_string(t) + "]";
    const json& e = as_array(arr[t], at);
    if (e.size() != 2) throw InputError(at + ": expected [index, coefficient]");
    const std::uint64_t k = as_uint(e[0], at + "[0]");
    const std::uint64_t c = as_uint(e[1], at + "[1]");
    if (k >= n) throw InputError(at + ": index " + std::to_string(k) + " out of range");
    if (c >= p) throw InputError(at + ": coefficient " + std::to_string(c) + " not below p = " + std::to_string(p));
    if (c == 0) throw InputError(at + ": zero coefficient stored");
    if (!out.empty() && out.back().index >= k) throw InputError(at + ": indices not strictly increasing");
    out.push_back({static_cast<std::uint32_t>(k), static_cast<Coeff>(c)});
  }
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string serialize(const AlgebraFile& f) {
  std::string s = "{\n";
  s += "  \"format_version\": " + std::to_string(f.format_version) + ",\n";
  s += "  \"p\": " + std::to_string(f.p) + ",\n";
  s += "  \"dim\": " + std::to_string(f.dim) + ",\n";
  s += "  \"basis_labels\": " + json(f.basis_labels).dump() + ",\n";
  s += "  \"brackets\": [";
  for (std::size_t t = 0; t < f.brackets.size(); ++t) {
    const BracketTriple& b = f.brackets[t];
    s += t ? ",\n    " : "\n    ";
    s += "[" + std::to_string(b.i) + ", " + std::to_string(b.j) + ", " + terms_text(b.value) + "]";
  }
  s += f.brackets.empty() ? "]" : "\n  ]";
  if (f.pmap) {
    s += ",\n  \"pmap\": [";
    for (std::size_t i = 0; i < f.pmap->size(); ++i) s += (i ? ",\n    " : "\n    ") + terms_text((*f.pmap)[i]);
    s += f.pmap->empty() ? "]" : "\n  ]";
  }
  if (f.grading) {
    s += ",\n  \"grading\": {\"modulus\": " + std::to_string(f.grading->modulus) + ", \"weights\": [";
    for (std::size_t i = 0; i < f.grading->weights.size(); ++i)
      s += (i ? ", " : "") + json(f.grading->weights[i]).dump();
    s += "]}";
  }
  ojson prov = ojson::object();
  for (const auto& [k, v] : f.provenance) prov[k] = v;
  s += ",\n  \"provenance\": " + prov.dump() + "\n}\n";
  return s;
}

AlgebraFile deserialize(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw InputError("algebra file: expected a JSON object");
  reject_unknown(j, {"format_version", "p", "dim", "basis_labels", "brackets", "pmap", "grading", "provenance"},
                 "algebra file");
  AlgebraFile f;
  f.format_version = static_cast<int>(as_int(field(j, "format_version", "algebra file"), "format_version"));
  if (f.format_version != kAlgebraFormatVersion)
    throw InputError("format_version " + std::to_string(f.format_version) + " is not supported (expected " +
                     std::to_string(kAlgebraFormatVersion) + ")");
  const std::uint64_t p = as_uint(field(j, "p", "algebra file"), "p");
  if (p < 2 || p >= (1u << 15)) throw InputError("p: out of range");
  f.p = static_cast<std::uint32_t>(p);
  f.dim = as_uint(field(j, "dim", "algebra file"), "dim");
  const json& labels = as_array(field(j, "basis_labels", "algebra file"), "basis_labels");
  if (labels.size() != f.dim) throw InputError("basis_labels: expected " + std::to_string(f.dim) + " labels");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_string()) throw InputError("basis_labels[" + std::to_string(i) + "]: expected a string");
    f.basis_labels.push_back(labels[i].get<std::string>());
  }
  const json& br = as_array(field(j, "brackets", "algebra file"), "brackets");
  for (std::size_t t = 0; t < br.size(); ++t) {
    const std::string at = "brackets[" + std::to_string(t) + "]";
    const json& e = as_array(br[t], at);
    if (e.size() != 3) throw InputError(at + ": expected [i, j, terms]");
    BracketTriple b;
    b.i = as_uint(e[0], at + "[0]");
    b.j = as_uint(e[1], at + "[1]");
    if (b.i >= b.j) throw InputError(at + ": need i < j");
    if (b.j >= f.dim) throw InputError(at + ": index out of range");
    if (!f.brackets.empty() && std::pair(f.brackets.back().i, f.brackets.back().j) >= std::pair(b.i, b.j))
      throw InputError(at + ": triples not sorted by (i, j)");
    b.value = parse_terms(e[2], f.dim, f.p, at + "[2]");
    if (b.value.empty()) throw InputError(at + ": zero bracket stored");
    f.brackets.push_back(std::move(b));
  }
  if (auto it = j.find("pmap"); it != j.end()) {
    const json& pm = as_array(*it, "pmap");
    if (pm.size() != f.dim) throw InputError("pmap: expected " + std::to_string(f.dim) + " images");
    std::vector<SparseVec> images;
    for (std::size_t i = 0; i < pm.size(); ++i)
      images.push_back(parse_terms(pm[i], f.dim, f.p, "pmap[" + std::to_string(i) + "]"));
    f.pmap = std::move(images);
  }
  if (auto it = j.find("grading"); it != j.end()) {
    if (!it->is_object()) throw InputError("grading: expected an object");
    reject_unknown(*it, {"modulus", "weights"}, "grading");
    Grading g;
    g.modulus = as_int(field(*it, "modulus", "grading"), "grading.modulus");
    if (g.modulus < 0) throw InputError("grading.modulus: negative");
    const json& ws = as_array(field(*it, "weights", "grading"), "grading.weights");
    if (ws.size() != f.dim) throw InputError("grading.weights: expected " + std::to_string(f.dim) + " weights");
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const std::string at = "grading.weights[" + std::to_string(i) + "]";
      Weight w;
      for (const json& x : as_array(ws[i], at)) w.push_back(as_int(x, at));
      if (i && w.size() != g.weights.front().size()) throw InputError(at + ": rank differs from weights[0]");
      g.weights.push_back(std::move(w));
    }
    f.grading = std::move(g);
  }
  if (auto it = j.find("provenance"); it != j.end()) {
    if (!it->is_object()) throw InputError("provenance: expected an object");
    for (auto p2 = it->begin(); p2 != it->end(); ++p2) {
      if (!p2->is_string()) throw InputError("provenance." + p2.key() + ": expected a string");
      f.provenance[p2.key()] = p2->get<std::string>();
    }
  }
  return f;
}

AlgebraFile to_file(const LieAlgebra& L, const std::vector<Vec>* pmap) {
  AlgebraFile f;
  f.p = L.p();
  f.dim = L.dim();
  f.basis_labels = L.labels();
  for (const auto& [ij, v] : L.brackets())
    if (!v.empty()) f.brackets.push_back({ij.first, ij.second, v});
  if (pmap) {
    std::vector<SparseVec> images;
    for (const Vec& v : *pmap) images.push_back(L.field().to_sparse(v));
    f.pmap = std::move(images);
  }
  f.grading = L.grading();
  f.provenance = L.provenance();
  return f;
}

AlgebraFile to_file(const RestrictedLieAlgebra& R) { return to_file(R.lie, &R.pmap); }

RestrictedLieAlgebra LoadedAlgebra::restricted() const {
  if (!pmap) throw PreconditionError("algebra file has no p-map");
  return {lie, *pmap};
}

LoadedAlgebra from_file(const AlgebraFile& f) {
  if (f.basis_labels.size() != f.dim) throw DimensionError("label count differs from dim");
  BracketTable table;
  for (const BracketTriple& b : f.brackets) table[{b.i, b.j}] = b.value;
  LoadedAlgebra out{LieAlgebra(PrimeField(f.p), f.basis_labels, table), std::nullopt};
  for (const auto& [k, v] : f.provenance) out.lie.set_provenance(k, v);
  if (f.grading) out.lie.set_grading(*f.grading);
  if (f.pmap) {
    std::vector<Vec> images;
    for (const SparseVec& v : *f.pmap) images.push_back(out.lie.field().to_dense(v, f.dim));
    out.pmap = std::move(images);
  }
  return out;
}

AlgebraFile read_algebra_file(const std::string& path) { return deserialize(read_text(path)); }

void write_algebra_file(const std::string& path, const AlgebraFile& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << serialize(f);
}

std::string report_json(const CohomologyReport& r, bool generators, int indent) {
  ojson j;
  j["dim"] = r.dim;
  j["restricted"] = r.restricted;
  j["h1"] = r.h1;
  j["h2"] = r.h2;
  if (r.restricted) j["h2_restricted"] = r.h2_restricted;
  j["method"] = r.method;
  j["generating_set"] = r.generating_set;
  ojson blocks = ojson::array();
  for (const BlockStat& b : r.blocks) {
    ojson o;
    o["weight"] = b.weight;
    o["skipped"] = b.skipped;
    o["unknowns"] = b.unknowns;
    o["transports"] = b.transports;
    o["h1"] = b.h1;
    o["h2"] = b.h2;
    if (r.restricted) {
      o["h2_restricted"] = b.h2_restricted;
      o["injective"] = b.injective;
    }
    o["seconds"] = b.seconds;
    blocks.push_back(std::move(o));
  }
  j["blocks"] = std::move(blocks);
  if (generators) {
    ojson gens = ojson::array();
    for (const RestrictedDeformation& d : r.generators) {
      ojson g;
      g["weight"] = d.weight;
      ojson f = ojson::array();
      for (const auto& [ij, v] : d.f) {
        ojson terms = ojson::array();
        for (const Term& t : v) terms.push_back({t.index, t.coeff});
        f.push_back({ij.first, ij.second, terms});
      }
      g["f"] = std::move(f);
      ojson om = ojson::array();
      for (const SparseVec& v : d.omega) {
        ojson terms = ojson::array();
        for (const Term& t : v) terms.push_back({t.index, t.coeff});
        om.push_back(std::move(terms));
      }
      g["omega"] = std::move(om);
      gens.push_back(std::move(g));
    }
    j["generators"] = std::move(gens);
  }
  ojson prov = ojson::object();
  for (const auto& [k, v] : r.provenance) prov[k] = v;
  j["provenance"] = std::move(prov);
  j["seconds"] = r.seconds;
  return j.dump(indent);
}

std::string hopf_to_json(const HopfAlgebra& H, int indent) {
  const std::size_t D = H.dim;
  ojson j;
  j["format_version"] = kAlgebraFormatVersion;
  j["kind"] = "hopf";
  j["p"] = H.F.p();
  j["dim"] = D;
  j["labels"] = H.labels;
  const bool dense = D <= 256;
  j["encoding"] = dense ? "dense" : "sparse";
  j["unit"] = H.unit;
  j["counit"] = H.counit;
  auto terms = [](const SparseVec& v) {
    ojson a = ojson::array();
    for (const Term& t : v) a.push_back({t.index, t.coeff});
    return a;
  };
  if (dense) {
    ojson m = ojson::array();
    for (std::size_t a = 0; a < D; ++a) {
      ojson row = ojson::array();
      for (std::size_t b = 0; b < D; ++b) row.push_back(H.F.to_dense(H.mult[a * D + b], D));
      m.push_back(std::move(row));
    }
    j["mult"] = std::move(m);
    ojson c = ojson::array();
    for (std::size_t a = 0; a < D; ++a) {
      const Vec flat = H.F.to_dense(H.comult[a], D * D);
      ojson mat = ojson::array();
      for (std::size_t i = 0; i < D; ++i) mat.push_back(Vec(flat.begin() + i * D, flat.begin() + (i + 1) * D));
      c.push_back(std::move(mat));
    }
    j["comult"] = std::move(c);
    ojson s = ojson::array();
    for (std::size_t a = 0; a < D; ++a) s.push_back(H.F.to_dense(H.antipode[a], D));
    j["antipode"] = std::move(s);
  } else {
    ojson m = ojson::array();
    for (std::size_t a = 0; a < D; ++a)
      for (std::size_t b = 0; b < D; ++b)
        if (!H.mult[a * D + b].empty()) m.push_back({a, b, terms(H.mult[a * D + b])});
    j["mult"] = std::move(m);
    ojson c = ojson::array();
    for (std::size_t a = 0; a < D; ++a) {
      ojson t = ojson::array();
      for (const Term& x : H.comult[a]) t.push_back({x.index / D, x.index % D, x.coeff});
      c.push_back(std::move(t));
    }
    j["comult"] = std::move(c);
    ojson s = ojson::array();
    for (std::size_t a = 0; a < D; ++a) s.push_back(terms(H.antipode[a]));
    j["antipode"] = std::move(s);
  }
  return j.dump(indent);
}

HopfAlgebra hopf_from_json(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw InputError("hopf file: expected a JSON object");
  reject_unknown(j, {"format_version", "kind", "p", "dim", "labels", "encoding", "unit", "counit", "mult", "comult",
                     "antipode"},
                 "hopf file");
  if (as_int(field(j, "format_version", "hopf file"), "format_version") != kAlgebraFormatVersion)
    throw InputError("hopf file: unsupported format_version");
  if (field(j, "kind", "hopf file") != "hopf") throw InputError("hopf file: kind must be \"hopf\"");
  const std::uint64_t p = as_uint(field(j, "p", "hopf file"), "p");
  if (p < 2 || p >= (1u << 15)) throw InputError("p: out of range");
  const std::size_t D = as_uint(field(j, "dim", "hopf file"), "dim");
  HopfAlgebra H(PrimeField(static_cast<std::uint32_t>(p)), D);
  const PrimeField& F = H.F;
  auto dense_vec = [&](const json& v, std::size_t n, const std::string& at) {
    const json& a = as_array(v, at);
    if (a.size() != n) throw InputError(at + ": expected length " + std::to_string(n));
    Vec out(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t c = as_uint(a[i], at);
      if (c >= p) throw InputError(at + "[" + std::to_string(i) + "]: coefficient not below p");
      out[i] = static_cast<Coeff>(c);
    }
    return out;
  };
  if (auto it = j.find("labels"); it != j.end()) {
    const json& ls = as_array(*it, "labels");
    if (ls.size() != D) throw InputError("labels: expected " + std::to_string(D) + " labels");
    for (std::size_t i = 0; i < D; ++i) H.labels[i] = ls[i].get<std::string>();
  }
  H.unit = dense_vec(field(j, "unit", "hopf file"), D, "unit");
  H.counit = dense_vec(field(j, "counit", "hopf file"), D, "counit");
  const std::string enc = field(j, "encoding", "hopf file").get<std::string>();
  if (enc == "dense") {
    const json& m = as_array(field(j, "mult", "hopf file"), "mult");
    if (m.size() != D) throw InputError("mult: expected " + std::to_string(D) + " rows");
    for (std::size_t a = 0; a < D; ++a) {
      const json& row = as_array(m[a], "mult");
      if (row.size() != D) throw InputError("mult[" + std::to_string(a) + "]: wrong length");
      for (std::size_t b = 0; b < D; ++b)
        H.mult[a * D + b] = F.to_sparse(dense_vec(row[b], D, "mult[" + std::to_string(a) + "][" + std::to_string(b) + "]"));
    }
    const json& c = as_array(field(j, "comult", "hopf file"), "comult");
    if (c.size() != D) throw InputError("comult: wrong length");
    for (std::size_t a = 0; a < D; ++a) {
      const json& mat = as_array(c[a], "comult");
      if (mat.size() != D) throw InputError("comult[" + std::to_string(a) + "]: wrong length");
      Vec flat;
      for (std::size_t i = 0; i < D; ++i) {
        const Vec r = dense_vec(mat[i], D, "comult[" + std::to_string(a) + "][" + std::to_string(i) + "]");
        flat.insert(flat.end(), r.begin(), r.end());
      }
      H.comult[a] = F.to_sparse(flat);
    }
    const json& s = as_array(field(j, "antipode", "hopf file"), "antipode");
    if (s.size() != D) throw InputError("antipode: wrong length");
    for (std::size_t a = 0; a < D; ++a) H.antipode[a] = F.to_sparse(dense_vec(s[a], D, "antipode"));
  } else if (enc == "sparse") {
    for (const json& e : as_array(field(j, "mult", "hopf file"), "mult")) {
      if (!e.is_array() || e.size() != 3) throw InputError("mult: expected [a, b, terms]");
      const std::size_t a = as_uint(e[0], "mult"), b = as_uint(e[1], "mult");
      if (a >= D || b >= D) throw InputError("mult: index out of range");
      H.mult[a * D + b] = parse_terms(e[2], D, H.F.p(), "mult");
    }
    const json& c = as_array(field(j, "comult", "hopf file"), "comult");
    if (c.size() != D) throw InputError("comult: wrong length");
    for (std::size_t a = 0; a < D; ++a) {
      std::vector<Term> t;
      for (const json& e : as_array(c[a], "comult")) {
        if (!e.is_array() || e.size() != 3) throw InputError("comult: expected [i, j, c]");
        const std::size_t x = as_uint(e[0], "comult"), y = as_uint(e[1], "comult");
        const std::uint64_t v = as_uint(e[2], "comult");
        if (x >= D || y >= D || v >= p) throw InputError("comult: entry out of range");
        t.push_back({static_cast<std::uint32_t>(x * D + y), static_cast<Coeff>(v)});
      }
      H.comult[a] = F.normalize(std::move(t));
    }
    const json& s = as_array(field(j, "antipode", "hopf file"), "antipode");
    if (s.size() != D) throw InputError("antipode: wrong length");
    for (std::size_t a = 0; a < D; ++a) H.antipode[a] = parse_terms(s[a], D, H.F.p(), "antipode");
  } else {
    throw InputError("encoding: expected \"dense\" or \"sparse\"");
  }
  return H;
}

}  // namespace rlie
