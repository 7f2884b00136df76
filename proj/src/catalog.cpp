#include "rlie/catalog.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "json.hpp"
#include "rlie/cartan.hpp"
#include "rlie/classical.hpp"
#include "rlie/errors.hpp"

namespace rlie {
namespace {

std::string canonical_family(std::string f) {
  std::transform(f.begin(), f.end(), f.begin(), [](unsigned char c) { return std::tolower(c); });
  if (f == "w") return "witt";
  if (f == "s") return "special";
  if (f == "h") return "hamiltonian";
  if (f == "k") return "contact";
  if (f == "m") return "melikian";
  return f;
}

std::string join(const std::vector<std::uint32_t>& n) {
  std::string s;
  for (std::size_t i = 0; i < n.size(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
  return s;
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

LoadedAlgebra build_algebra(const BuildSpec& spec) {
  const std::string f = canonical_family(spec.family);
  auto n_or_ones = [&](std::size_t k) {
    if (spec.n.empty()) return std::vector<std::uint32_t>(k, 1);
    if (spec.n.size() == 1) return std::vector<std::uint32_t>(k, spec.n[0]);
    if (spec.n.size() != k) throw InputError("expected " + std::to_string(k) + " entries in n");
    return spec.n;
  };
  auto cartan = [](const CartanAlgebra& A) {
    LoadedAlgebra out{A.lie, std::nullopt};
    if (A.restricted()) out.pmap = A.pmap;
    return out;
  };
  if (f == "witt") return cartan(witt(spec.m, n_or_ones(spec.m), spec.p));
  if (f == "special") return cartan(special(spec.m, n_or_ones(spec.m), spec.p));
  if (f == "hamiltonian") return cartan(hamiltonian(spec.m, n_or_ones(spec.m), spec.p));
  if (f == "contact") return cartan(contact(spec.m, n_or_ones(spec.m), spec.p));
  if (f == "melikian") {
    const auto n = n_or_ones(2);
    return cartan(melikian(n[0], n[1], spec.p));
  }
  if (f == "sl" || f == "psl" || f == "so" || f == "sp") {
    RestrictedLieAlgebra R = construct_classical({parse_classical_family(f), spec.size, spec.p});
    return {std::move(R.lie), std::move(R.pmap)};
  }
  throw InputError("unknown family \"" + spec.family + "\"");
}

std::string display_name(const BuildSpec& spec) {
  const std::string f = canonical_family(spec.family);
  if (f == "sl" || f == "psl" || f == "so" || f == "sp") return f + "(" + std::to_string(spec.size) + ")";
  const std::string letter = f == "witt" ? "W" : f == "special" ? "S" : f == "hamiltonian" ? "H" : f == "contact" ? "K" : "M";
  if (letter == "M") {
    const auto n = spec.n.empty() ? std::vector<std::uint32_t>{1, 1} : spec.n;
    return "M(" + join(n) + ")";
  }
  std::string n = spec.n.empty() ? "1" : join(spec.n);
  return letter + "(" + std::to_string(spec.m) + ";" + n + ")";
}

std::vector<CatalogEntry> reference_catalog(int max_tier) {
  auto cart = [](const char* fam, std::size_t m, std::uint32_t p) { return BuildSpec{fam, m, {}, p, 2}; };
  auto cls = [](const char* fam, std::size_t size, std::uint32_t p) { return BuildSpec{fam, 1, {}, p, size}; };
  std::vector<CatalogEntry> all;
  for (std::uint32_t p : {5u, 7u}) all.push_back({cart("witt", 1, p), 1, p, true, true, 1, false});
  for (std::uint32_t p : {5u, 7u}) {
    all.push_back({cls("sl", 2, p), 1, 3, true, false, 0, false});
    all.push_back({cls("sl", 3, p), 1, 8, true, false, 0, false});
  }
  all.push_back({cart("hamiltonian", 2, 5), 1, 23, true, true, 3, false});
  all.push_back({cls("sp", 4, 5), 1, 10, std::nullopt, false, std::nullopt, false});
  all.push_back({cls("psl", 5, 5), 1, 23, true, std::nullopt, std::nullopt, false});
  all.push_back({cls("sl", 5, 5), 1, 24, false, std::nullopt, std::nullopt, false});
  all.push_back({{"melikian", 1, {1, 1}, 5, 2}, 1, 125, true, true, std::nullopt, false});
  all.push_back({cart("witt", 2, 5), 2, 50, true, true, 2, false});
  all.push_back({cart("contact", 3, 5), 2, 125, true, true, std::nullopt, true});
  all.push_back({cart("special", 3, 5), 3, 248, std::nullopt, std::nullopt, 3, false});
  all.push_back({cart("contact", 3, 5), 3, 125, std::nullopt, std::nullopt, 3, false});
  all.push_back({{"melikian", 1, {1, 1}, 5, 2}, 3, 125, std::nullopt, std::nullopt, 5, false});
  std::erase_if(all, [&](const CatalogEntry& e) { return e.tier > max_tier; });
  return all;
}

CatalogResult run_catalog_entry(const CatalogEntry& e, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  CatalogResult r;
  r.name = display_name(e.spec);
  r.params = "p=" + std::to_string(e.spec.p);
  r.tier = e.tier;
  const LoadedAlgebra A = build_algebra(e.spec);
  auto add = [&](std::string q, std::string expected, std::string computed, std::string source) {
    const bool match = expected.empty() || expected == computed;
    r.comparisons.push_back({std::move(q), std::move(expected), std::move(computed), std::move(source), match});
  };
  if (e.dim) add("dim", std::to_string(*e.dim), std::to_string(A.lie.dim()), "formula");
  if (e.simple) {
    SimplicityOptions o;
    o.seed = seed;
    const SimplicityResult s = is_simple(A.lie, o);
    add("simple", yes_no(*e.simple),
        s.verdict == Simplicity::inconclusive ? "inconclusive" : yes_no(s.is_simple()), "published");
  }
  if (e.killing_degenerate)
    add("killing_degenerate", yes_no(*e.killing_degenerate), yes_no(killing_radical(A.lie).radical.dim() > 0),
        "published");
  if (e.compute_h1) add("h1", "", std::to_string(cohomology_dim(A.lie, 1, A.lie.grading())), "computed");
  if (e.h2_restricted) {
    const CohomologyReport c = restricted_h2(A.restricted());
    add("h2_restricted", std::to_string(*e.h2_restricted), std::to_string(c.h2_restricted), "published");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::size_t catalog_mismatches(const std::vector<CatalogResult>& results) {
  std::size_t n = 0;
  for (const auto& r : results)
    for (const auto& c : r.comparisons) n += !c.match;
  return n;
}

std::string catalog_json(const std::vector<CatalogResult>& results, bool timings) {
  using ojson = nlohmann::ordered_json;
  ojson j;
  ojson entries = ojson::array();
  for (const auto& r : results) {
    ojson o;
    o["name"] = r.name;
    o["params"] = r.params;
    o["tier"] = r.tier;
    ojson cs = ojson::array();
    for (const auto& c : r.comparisons) {
      ojson x;
      x["quantity"] = c.quantity;
      x["expected"] = c.expected.empty() ? ojson() : ojson(c.expected);
      x["computed"] = c.computed;
      x["source"] = c.source;
      x["match"] = c.match;
      cs.push_back(std::move(x));
    }
    o["comparisons"] = std::move(cs);
    if (timings) o["seconds"] = r.seconds;
    entries.push_back(std::move(o));
  }
  j["entries"] = std::move(entries);
  j["mismatches"] = catalog_mismatches(results);
  return j.dump(2);
}

std::string catalog_table(const std::vector<CatalogResult>& results) {
  std::ostringstream s;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-5s %-4s %-20s %-10s %-12s %-10s %s\n", "algebra", "p", "tier",
                "quantity", "expected", "computed", "source", "status");
  s << line;
  for (const auto& r : results)
    for (const auto& c : r.comparisons) {
      std::snprintf(line, sizeof line, "%-10s %-5s %-4d %-20s %-10s %-12s %-10s %s\n", r.name.c_str(),
                    r.params.substr(2).c_str(), r.tier, c.quantity.c_str(), c.expected.empty() ? "-" : c.expected.c_str(),
                    c.computed.c_str(), c.source.c_str(), c.match ? "ok" : "MISMATCH");
      s << line;
    }
  s << "mismatches: " << catalog_mismatches(results) << "\n";
  return s.str();
}

}  // namespace rlie
