#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rlie/catalog.hpp"
#include "rlie/errors.hpp"
#include "rlie/groupscheme.hpp"
#include "rlie/io.hpp"

namespace rlie::cli {
namespace {

using ojson = nlohmann::ordered_json;

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint32_t> parse_list(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    } catch (const std::exception&) {
      throw Usage("bad number list \"" + s + "\"");
    }
  }
  return out;
}

Weight parse_weight(const std::string& s) {
  Weight out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw Usage("bad weight \"" + s + "\"");
    }
  }
  return out;
}

std::map<std::string, std::string> parse_overrides(const std::vector<std::string>& sets) {
  std::map<std::string, std::string> out;
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw Usage("--set expects key=value, got \"" + s + "\"");
    out[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return out;
}

std::size_t to_size(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
    throw Usage("bad value for " + key + ": \"" + v + "\"");
  }
}

FiniteGroupData parse_group(const std::string& s) {
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  const std::size_t n = colon == std::string::npos ? 0 : to_size(s.substr(colon + 1), "group");
  if (kind == "cyclic" && n > 0) return cyclic_group(n);
  if (kind == "symmetric" && n > 0) return symmetric_group(n);
  if (kind == "klein") return direct_product(cyclic_group(2), cyclic_group(2));
  throw Usage("unknown group \"" + s + "\" (cyclic:N, symmetric:N, klein)");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

ojson hopf_summary(const HopfAlgebra& H) {
  ojson j;
  j["p"] = H.F.p();
  j["dim"] = H.dim;
  j["commutative"] = H.commutative();
  j["cocommutative"] = H.cocommutative();
  return j;
}

ojson report_object(const VerificationReport& r) {
  ojson j;
  j["ok"] = r.ok;
  j["failures"] = r.failures;
  return j;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool json = false;
  std::map<std::string, std::string> overrides;

  std::uint64_t seed(std::uint64_t dflt) const {
    auto it = overrides.find("seed");
    return it == overrides.end() ? dflt : to_size(it->second, "seed");
  }
};

int cmd_build(Context& cx, const BuildSpec& spec, const std::string& out_path) {
  const LoadedAlgebra A = build_algebra(spec);
  const AlgebraFile f = to_file(A.lie, A.pmap ? &*A.pmap : nullptr);
  const std::string text = serialize(f);
  if (out_path.empty()) {
    cx.out << text;
    return 0;
  }
  write_text(out_path, text);
  if (cx.json) {
    ojson j;
    j["algebra"] = display_name(spec);
    j["dim"] = A.lie.dim();
    j["restricted"] = A.pmap.has_value();
    j["out"] = out_path;
    cx.out << j.dump(2) << "\n";
  } else {
    cx.out << display_name(spec) << ": dim " << A.lie.dim() << (A.pmap ? ", restricted" : "") << " -> " << out_path
           << "\n";
  }
  return 0;
}

int cmd_verify(Context& cx, const std::string& path, const std::string& checks_arg) {
  const LoadedAlgebra A = from_file(read_algebra_file(path));
  std::vector<std::string> checks;
  std::stringstream ss(checks_arg);
  for (std::string c; std::getline(ss, c, ',');)
    if (!c.empty()) checks.push_back(c);
  ojson res = ojson::object();
  bool all = true;
  for (const std::string& c : checks) {
    ojson j;
    if (c == "jacobi") {
      j = report_object(verify_lie(A.lie));
    } else if (c == "restricted") {
      if (!A.pmap) {
        j["ok"] = false;
        j["failures"] = {"file has no p-map"};
      } else {
        j = report_object(verify_restricted(A.lie, *A.pmap, 6, cx.seed(0x11ab)));
      }
    } else if (c == "simple") {
      SimplicityOptions o;
      o.seed = cx.seed(o.seed);
      const SimplicityResult s = is_simple(A.lie, o);
      j["ok"] = s.is_simple();
      j["verdict"] = s.verdict == Simplicity::simple       ? "simple"
                     : s.verdict == Simplicity::not_simple ? "not simple"
                                                           : "inconclusive";
      j["reason"] = s.reason;
    } else if (c == "killing") {
      const KillingResult k = killing_radical(A.lie);
      j["ok"] = true;
      j["radical_dim"] = k.radical.dim();
      j["degenerate"] = k.radical.dim() > 0;
    } else {
      throw Usage("unknown check \"" + c + "\" (jacobi, restricted, simple, killing)");
    }
    all = all && j["ok"].get<bool>();
    res[c] = std::move(j);
  }
  if (cx.json) {
    ojson j;
    j["file"] = path;
    j["checks"] = std::move(res);
    j["ok"] = all;
    cx.out << j.dump(2) << "\n";
  } else {
    for (auto it = res.begin(); it != res.end(); ++it)
      cx.out << it.key() << ": " << (it.value()["ok"].get<bool>() ? "pass" : "FAIL") << "\n";
  }
  return all ? 0 : 1;
}

struct CohomArgs {
  std::string path;
  bool restricted = false, full = false, ungraded = false, no_skip = false, generators = false, consistency = false;
  std::vector<std::string> weights;
  std::optional<std::size_t> expect_h1, expect_h2, expect_h2r;
};

int cmd_cohom(Context& cx, const CohomArgs& a) {
  const LoadedAlgebra A = from_file(read_algebra_file(a.path));
  CohomologyOptions o;
  o.method = a.full ? CohomologyMethod::full : CohomologyMethod::parametrized;
  o.use_grading = !a.ungraded;
  o.skip_inner_torus = !a.no_skip;
  o.generators = a.generators || a.consistency;
  for (const std::string& w : a.weights) o.only_weights.push_back(parse_weight(w));
  const CohomologyReport r = a.restricted ? restricted_h2(A.restricted(), o) : lie_cohomology(A.lie, o);
  int code = 0;
  ojson mism = ojson::array();
  auto expect = [&](const char* what, const std::optional<std::size_t>& e, std::size_t got) {
    if (e && *e != got) {
      code = 1;
      mism.push_back({{"quantity", what}, {"expected", *e}, {"computed", got}});
    }
  };
  expect("h1", a.expect_h1, r.h1);
  expect("h2", a.expect_h2, r.h2);
  if (a.restricted) expect("h2_restricted", a.expect_h2r, r.h2_restricted);
  std::optional<ConsistencyReport> cons;
  if (a.consistency && a.restricted) {
    cons = consistency_check(A.restricted(), r);
    if (!cons->ok) code = 1;
  }
  if (cx.json) {
    ojson j = ojson::parse(report_json(r, a.generators));
    if (cons) j["consistency"] = {{"ok", cons->ok}, {"checks", cons->checks}, {"failures", cons->failures}};
    if (!mism.empty()) j["mismatches"] = mism;
    cx.out << j.dump(2) << "\n";
  } else {
    cx.out << "h1 = " << r.h1 << "\nh2 = " << r.h2 << "\n";
    if (a.restricted) cx.out << "h2_restricted = " << r.h2_restricted << "\n";
    if (cons) cx.out << "consistency: " << (cons->ok ? "ok" : "FAIL") << "\n";
    for (const auto& m : mism) cx.out << "MISMATCH " << m.dump() << "\n";
  }
  return code;
}

int cmd_catalog(Context& cx, int tier, bool timings) {
  if (auto it = cx.overrides.find("tier"); it != cx.overrides.end()) tier = static_cast<int>(to_size(it->second, "tier"));
  if (tier < 1 || tier > 3) throw Usage("--tier must be 1, 2 or 3");
  std::vector<CatalogResult> results;
  for (const CatalogEntry& e : reference_catalog(tier)) {
    results.push_back(run_catalog_entry(e, cx.seed(0x5eed)));
    if (!cx.json) cx.err << "  " << results.back().name << " done in " << results.back().seconds << " s\n";
  }
  cx.out << (cx.json ? catalog_json(results, timings) + "\n" : catalog_table(results));
  return catalog_mismatches(results) ? 1 : 0;
}

HopfAlgebra load_hopf(const std::string& path) { return hopf_from_json(read_text(path)); }

int emit_hopf(Context& cx, const HopfAlgebra& H, const std::string& out_path, ojson extra = ojson::object()) {
  if (!out_path.empty()) write_text(out_path, hopf_to_json(H));
  ojson j = hopf_summary(H);
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  if (!out_path.empty()) j["out"] = out_path;
  cx.out << (cx.json ? j.dump(2) : j.dump()) << "\n";
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Restricted Lie algebras over F_p: construction, verification, cohomology, Hopf algebras"};
  app.require_subcommand(1);
  app.fallthrough();
  Context cx{out, err, false, {}};
  std::vector<std::string> sets;
  app.add_flag("--json", cx.json, "Machine-readable output");
  app.add_option("--set", sets, "Configuration override key=value (budget, max_table, tier, seed)");

  BuildSpec spec;
  std::string out_path, n_list;
  std::optional<std::size_t> r_opt;
  auto* build = app.add_subcommand("build", "Construct an algebra and write its file");
  build->add_option("family", spec.family, "witt, special, hamiltonian, contact, melikian, sl, psl, so, sp")->required();
  build->add_option("--m", spec.m, "Number of variables");
  build->add_option("--r", r_opt, "H: m = 2r, K: m = 2r+1");
  build->add_option("--n", n_list, "Heights, one value or a comma list");
  build->add_option("--p", spec.p, "Characteristic");
  build->add_option("--size", spec.size, "Matrix size for classical families");
  build->add_option("--out", out_path, "Output file (stdout when omitted)");

  std::string path, checks = "jacobi,restricted";
  auto* verify = app.add_subcommand("verify", "Check an algebra file");
  verify->add_option("file", path)->required();
  verify->add_option("--checks", checks, "Comma list of jacobi, restricted, simple, killing");

  CohomArgs ca;
  auto* cohom = app.add_subcommand("cohom", "Cohomology with adjoint coefficients");
  cohom->add_option("file", ca.path)->required();
  cohom->add_flag("--restricted", ca.restricted, "Restricted H^2");
  auto* graded = cohom->add_flag("--graded", "Blockwise by the grading with the generating-set solver (default)");
  cohom->add_flag("--full", ca.full, "Assemble each block from the differentials directly")->excludes(graded);
  cohom->add_flag("--ungraded", ca.ungraded, "Ignore the grading");
  cohom->add_flag("--no-skip", ca.no_skip, "Solve blocks killed by an inner torus too");
  cohom->add_flag("--generators", ca.generators, "Include representative deformations");
  cohom->add_flag("--consistency", ca.consistency, "Run the consistency checks");
  cohom->add_option("--weight", ca.weights, "Only solve this weight (comma list), repeatable");
  cohom->add_option("--expect-h1", ca.expect_h1);
  cohom->add_option("--expect-h2", ca.expect_h2);
  cohom->add_option("--expect-h2-restricted", ca.expect_h2r);

  int tier = 1;
  bool reference_table = false, no_timings = false;
  auto* catalog = app.add_subcommand("catalog", "Expected versus computed values for the reference table");
  catalog->add_flag("--reference-table,--paper-table", reference_table, "Run the reference table")->required();
  catalog->add_option("--tier", tier, "Highest tier to run (1, 2, 3)");
  catalog->add_flag("--no-timings", no_timings, "Omit timing fields");

  auto* hopf = app.add_subcommand("hopf", "Finite group schemes as Hopf algebras");
  hopf->require_subcommand(1);
  hopf->fallthrough();
  std::string hfile, group;
  unsigned hn = 1, hheight = 1;
  std::uint32_t hp = 5;
  auto* h_env = hopf->add_subcommand("enveloping", "Restricted enveloping algebra of an algebra file");
  h_env->add_option("file", hfile)->required();
  h_env->add_option("--out", out_path);
  auto* h_const = hopf->add_subcommand("constant", "Functions on a finite group");
  auto* h_group = hopf->add_subcommand("group-algebra", "Group algebra of a finite group");
  for (auto* s : {h_const, h_group}) {
    s->add_option("--group", group, "cyclic:N, symmetric:N or klein")->required();
    s->add_option("--p", hp);
    s->add_option("--out", out_path);
  }
  auto* h_trunc = hopf->add_subcommand("truncated", "F_p[x]/(x^{p^h}) with x primitive");
  h_trunc->add_option("--p", hp);
  h_trunc->add_option("--height", hheight);
  h_trunc->add_option("--out", out_path);
  std::map<std::string, CLI::App*> hops;
  for (const char* name : {"verify", "dual", "primitives", "height", "frobenius-kernel", "split", "group-likes"}) {
    auto* s = hopf->add_subcommand(name);
    s->add_option("file", hfile)->required();
    s->add_option("--out", out_path);
    hops[name] = s;
  }
  hops["frobenius-kernel"]->add_option("--n", hn);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    if (cx.json) out << ojson{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump() << "\n";
    return 2;
  }

  auto fail = [&](const char* type, const std::string& msg, int code) {
    err << "error: " << msg << "\n";
    if (cx.json) out << ojson{{"error", {{"type", type}, {"message", msg}}}}.dump() << "\n";
    return code;
  };
  try {
    cx.overrides = parse_overrides(sets);
    EnvelopeOptions env;
    if (const char* b = std::getenv("RLIE_HOPF_BUDGET")) env.budget = to_size(b, "RLIE_HOPF_BUDGET");
    if (auto it = cx.overrides.find("budget"); it != cx.overrides.end()) env.budget = to_size(it->second, "budget");
    if (auto it = cx.overrides.find("max_table"); it != cx.overrides.end())
      env.max_table = to_size(it->second, "max_table");

    if (*build) {
      if (!n_list.empty()) spec.n = parse_list(n_list);
      if (r_opt) {
        const std::string f = spec.family;
        if (f == "hamiltonian" || f == "H")
          spec.m = 2 * *r_opt;
        else if (f == "contact" || f == "K")
          spec.m = 2 * *r_opt + 1;
        else
          throw Usage("--r only applies to hamiltonian and contact");
      }
      return cmd_build(cx, spec, out_path);
    }
    if (*verify) return cmd_verify(cx, path, checks);
    if (*cohom) return cmd_cohom(cx, ca);
    if (*catalog) return cmd_catalog(cx, tier, !no_timings);
    if (*h_env) return emit_hopf(cx, restricted_enveloping(from_file(read_algebra_file(hfile)).restricted(), env), out_path);
    if (*h_const) return emit_hopf(cx, constant_hopf(parse_group(group), hp), out_path);
    if (*h_group) return emit_hopf(cx, group_algebra(parse_group(group), hp), out_path);
    if (*h_trunc) return emit_hopf(cx, truncated_polynomial(hp, hheight), out_path);
    const HopfAlgebra H = load_hopf(hfile);
    if (*hops["verify"]) {
      const HopfReport r = verify_hopf(H);
      ojson j = hopf_summary(H);
      j["ok"] = r.ok;
      j["failures"] = r.failures;
      out << (cx.json ? j.dump(2) : j.dump()) << "\n";
      return r.ok ? 0 : 1;
    }
    if (*hops["dual"]) return emit_hopf(cx, dual_hopf(H), out_path);
    if (*hops["primitives"]) {
      const RestrictedLieAlgebra P = primitives(H);
      if (!out_path.empty()) write_algebra_file(out_path, to_file(P));
      ojson j;
      j["dim"] = P.lie.dim();
      j["labels"] = P.lie.labels();
      if (!out_path.empty()) j["out"] = out_path;
      out << (cx.json ? j.dump(2) : j.dump()) << "\n";
      return 0;
    }
    if (*hops["height"]) {
      const auto h = height(H);
      ojson j = hopf_summary(H);
      j["connected"] = h.has_value();
      j["height"] = h ? ojson(*h) : ojson("not connected");
      out << (cx.json ? j.dump(2) : j.dump()) << "\n";
      return 0;
    }
    if (*hops["frobenius-kernel"]) return emit_hopf(cx, frobenius_kernel(H, hn), out_path);
    if (*hops["split"]) {
      const ConnectedEtale s = split_connected_etale(H);
      ojson j = hopf_summary(H);
      j["components"] = s.components;
      j["connected"] = hopf_summary(s.connected);
      j["etale"] = hopf_summary(s.etale);
      if (!out_path.empty()) {
        write_text(out_path + ".connected.json", hopf_to_json(s.connected));
        write_text(out_path + ".etale.json", hopf_to_json(s.etale));
      }
      out << (cx.json ? j.dump(2) : j.dump()) << "\n";
      return 0;
    }
    if (*hops["group-likes"]) {
      const GroupLikes g = group_likes(H);
      ojson j;
      j["order"] = g.group.order;
      j["identity"] = g.group.identity;
      j["table"] = g.group.table;
      j["elements"] = g.elements;
      out << (cx.json ? j.dump(2) : j.dump()) << "\n";
      return 0;
    }
  } catch (const Usage& e) {
    return fail("usage", e.what(), 2);
  } catch (const ResourceError& e) {
    return fail("resource", e.what(), 2);
  } catch (const PreconditionError& e) {
    return fail("precondition", e.what(), 2);
  } catch (const InputError& e) {
    return fail("input", e.what(), 2);
  } catch (const DimensionError& e) {
    return fail("dimension", e.what(), 2);
  } catch (const Error& e) {
    return fail("error", e.what(), 1);
  }
  return 2;
}

}  // namespace rlie::cli
