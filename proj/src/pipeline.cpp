#include "twistforge/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "twistforge/errors.hpp"
#include "twistforge/reader.hpp"

namespace twistforge {

using nlohmann::json;

// ---------------------------------------------------------------------------
// config

namespace {

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError("'" + where + "' must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.contains(k)) throw ConfigError("unknown key '" + (where.empty() ? k : where + "." + k) + "'");
}

template <class T>
T read(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + key + "' has the wrong type");
  }
}

void one_of(const std::string& v, const std::string& key, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw ConfigError("key '" + key + "' must be one of " + list + ", got '" + v + "'");
}

}  // namespace

RunConfig config_from_json(const json& j) {
  reject_unknown(j, "",
                 {"preset", "case", "twist", "parameters", "order", "variant", "checks", "generator", "grid", "states",
                  "hbar", "scan", "format", "output"});
  RunConfig c;
  if (j.contains("preset")) c.preset = read<std::string>(j["preset"], "preset");
  if (j.contains("case")) c.twist_case = read<std::string>(j["case"], "case");
  if (j.contains("twist")) c.twist = read<std::string>(j["twist"], "twist");
  if (j.contains("parameters") && !j["parameters"].is_object()) throw ConfigError("'parameters' must be an object");
  if (j.contains("parameters"))
    for (const auto& [k, v] : j["parameters"].items()) {
      if (v.is_number()) c.parameters[k] = v.dump();
      else c.parameters[k] = read<std::string>(v, "parameters." + k);
    }
  if (j.contains("order")) c.order = read<int>(j["order"], "order");
  if (j.contains("variant")) c.variant = read<std::string>(j["variant"], "variant");
  if (j.contains("checks")) c.checks = read<std::vector<std::string>>(j["checks"], "checks");
  if (j.contains("generator")) c.generator = read<std::string>(j["generator"], "generator");
  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, "grid", {"n", "cutoff"});
    if (g.contains("n")) c.grid.n = read<int>(g["n"], "grid.n");
    if (g.contains("cutoff")) c.grid.cutoff = read<double>(g["cutoff"], "grid.cutoff");
  }
  if (j.contains("states")) {
    const json& s = j["states"];
    reject_unknown(s, "states", {"count", "seed", "p_range", "x_range", "sigma_min", "sigma_max"});
    if (s.contains("count")) c.states.count = read<std::size_t>(s["count"], "states.count");
    if (s.contains("seed")) c.states.seed = read<std::uint64_t>(s["seed"], "states.seed");
    if (s.contains("p_range")) c.states.p_range = read<double>(s["p_range"], "states.p_range");
    if (s.contains("x_range")) c.states.x_range = read<double>(s["x_range"], "states.x_range");
    if (s.contains("sigma_min")) c.states.sigma_min = read<double>(s["sigma_min"], "states.sigma_min");
    if (s.contains("sigma_max")) c.states.sigma_max = read<double>(s["sigma_max"], "states.sigma_max");
  }
  if (j.contains("hbar")) c.hbar = read<double>(j["hbar"], "hbar");
  if (j.contains("scan")) {
    const json& s = j["scan"];
    reject_unknown(s, "scan", {"centers", "sigma"});
    if (s.contains("centers")) c.scan_centers = read<std::vector<double>>(s["centers"], "scan.centers");
    if (s.contains("sigma")) c.scan_sigma = read<double>(s["sigma"], "scan.sigma");
  }
  if (j.contains("format")) c.format = read<std::string>(j["format"], "format");
  if (j.contains("output")) c.output = read<std::string>(j["output"], "output");

  if (!c.preset.empty()) one_of(c.preset, "preset", {"iso2", "iso11", "canonical"});
  if (!c.twist_case.empty()) one_of(c.twist_case, "case", {"i", "ii"});
  if (!c.preset.empty() && !c.twist_case.empty()) throw ConfigError("keys 'preset' and 'case' are exclusive");
  one_of(c.twist, "twist", {"simplified", "generic"});
  one_of(c.variant, "variant", {"corrected", "printed", "printed-2.5"});
  one_of(c.format, "format", {"json", "text", "csv"});
  for (const auto& k : c.checks)
    one_of(k, "checks", {"cocycle", "coassoc", "hermiticity", "jacobi", "realization", "adjudicate"});
  if (c.order < 1 || c.order > 8) throw ConfigError("key 'order' must be in 1..8");
  if (c.grid.n < 8 || c.grid.n % 2 != 0) throw ConfigError("key 'grid.n' must be even and at least 8");
  if (!(c.grid.cutoff > 0)) throw ConfigError("key 'grid.cutoff' must be positive");
  if (!(c.hbar > 0)) throw ConfigError("key 'hbar' must be positive");
  if (!(c.states.sigma_min > 0) || c.states.sigma_max < c.states.sigma_min)
    throw ConfigError("keys 'states.sigma_min/sigma_max' must satisfy 0 < min <= max");
  if (!(c.scan_sigma > 0)) throw ConfigError("key 'scan.sigma' must be positive");
  for (const auto& [k, v] : c.parameters)
    if (!param_from_name(k)) throw ConfigError("unknown parameter 'parameters." + k + "'");
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  if (!c.preset.empty()) j["preset"] = c.preset;
  if (!c.twist_case.empty()) j["case"] = c.twist_case;
  j["twist"] = c.twist;
  j["parameters"] = c.parameters;
  j["order"] = c.order;
  j["variant"] = c.variant;
  j["checks"] = c.checks;
  j["generator"] = c.generator;
  j["grid"] = {{"n", c.grid.n}, {"cutoff", c.grid.cutoff}};
  j["states"] = {{"count", c.states.count},         {"seed", c.states.seed},
                 {"p_range", c.states.p_range},     {"x_range", c.states.x_range},
                 {"sigma_min", c.states.sigma_min}, {"sigma_max", c.states.sigma_max}};
  j["hbar"] = c.hbar;
  j["scan"] = {{"centers", c.scan_centers}, {"sigma", c.scan_sigma}};
  j["format"] = c.format;
  if (!c.output.empty()) j["output"] = c.output;
  return j;
}

// ---------------------------------------------------------------------------
// resolution of the selector and parameter values

namespace {

struct Resolved {
  std::string name;  // preset or "case i" / "case ii" or "canonical"
  std::string preset;
  TwistSpec spec;
  std::map<Param, ParamScalar> into_spec;  // zero or symbolic, substituted before derivation
  std::map<Param, ParamScalar> post;       // numbers, substituted after derivation
  bool substituted = false;
};

std::vector<Param> allowed_parameters(const Resolved& r) {
  if (r.preset == "iso2") return {Param::alpha};
  if (r.preset == "iso11") return {Param::beta};
  if (r.preset == "canonical") return {};
  return case_parameters(r.spec.which);
}

Resolved resolve(const RunConfig& c) {
  Resolved r;
  if (!c.twist_case.empty()) {
    TwistCase tc = c.twist_case == "i" ? TwistCase::i : TwistCase::ii;
    r.spec = c.twist == "generic" ? TwistSpec::generic(tc, c.order) : TwistSpec::simplified(tc, c.order);
    r.name = "case " + c.twist_case;
  } else {
    r.preset = c.preset.empty() ? "canonical" : c.preset;
    r.spec = preset_spec(r.preset, c.order);
    r.name = r.preset;
  }
  r.spec.variant = c.variant.rfind("printed", 0) == 0 ? TwistVariant::printed : TwistVariant::corrected;

  std::vector<Param> allowed = allowed_parameters(r);
  for (const auto& [name, text] : c.parameters) {
    Param p = *param_from_name(name);
    if (std::find(allowed.begin(), allowed.end(), p) == allowed.end())
      throw ConfigError("parameter '" + name + "' does not belong to " + r.name);
    ParamScalar v;
    try {
      v = parse_scalar(text);
    } catch (const ParseError& e) {
      throw ConfigError("parameters." + name + ": " + e.what());
    }
    if (!v.is_zero() && v.max_deformation_degree() == 0) r.post[p] = v;
    else r.into_spec[p] = v;
  }
  if (!r.preset.empty()) {
    // preset values act through the assignment they parametrize
    for (auto& [p, v] : r.spec.assignment) v = v.substitute(r.into_spec);
  } else {
    for (const auto& [p, v] : r.into_spec) r.spec.assignment[p] = v;
  }
  r.substituted = !r.into_spec.empty() || !r.post.empty();
  return r;
}

RelationTable resolved_table(const Resolved& r) {
  RelationTable t = r.preset.empty() || r.substituted ? relation_table(r.spec, r.name)
                                                      : relation_table(r.preset, r.spec.order);
  if (!r.post.empty())
    for (auto& e : t.entries) {
      e.value = e.value.substitute(r.post);
      e.series = e.series.substitute(r.post);
    }
  // drop entries a substitution turned into zero
  std::erase_if(t.entries, [](const RelationEntry& e) { return e.value.is_zero(); });
  return t;
}

std::optional<Generator> parse_generator(const std::string& s) {
  for (int k = 0; k < 10; ++k) {
    auto g = static_cast<Generator>(k);
    if (generator_name(g) == s) return g;
  }
  return std::nullopt;
}

std::string render_post(const Resolved& r) {
  std::string s;
  for (const auto& [p, v] : r.post) s += std::string(s.empty() ? "" : ", ") + std::string(param_name(p)) + " = " + v.str();
  return s;
}

CommandResult guarded(const std::function<CommandResult()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {2, "", std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace

// ---------------------------------------------------------------------------

CommandResult cmd_derive(const RunConfig& c) {
  return guarded([&] {
    if (c.format == "csv") throw ConfigError("derive supports json or text output");
    Resolved r = resolve(c);
    Twist F = build_twist(r.spec);
    RelationTable t = resolved_table(r);
    std::vector<std::pair<std::string, std::string>> cop;
    for (int mu = 0; mu < 4; ++mu) {
      Generator g = momentum(mu);
      cop.emplace_back(std::string(generator_name(g)), twisted_coproduct(F, AlgebraElement::generator(g)).str(true));
    }
    std::ostringstream o;
    if (c.format == "json") {
      json j;
      j["selector"] = r.name;
      j["order"] = c.order;
      j["coproducts"] = json::object();
      for (const auto& [g, s] : cop) j["coproducts"][g] = s;
      j["relations"] = t.to_json();
      if (!r.post.empty()) j["substituted_after_derivation"] = render_post(r);
      o << j.dump(2) << "\n";
    } else {
      o << "coproducts (order " << c.order << ")\n";
      for (const auto& [g, s] : cop) o << "  D(" << g << ") = " << s << "\n";
      if (!r.post.empty()) o << "  note: coproducts symbolic; " << render_post(r) << " substituted in relations\n";
      o << t.text();
    }
    return CommandResult{0, o.str(), ""};
  });
}

CommandResult cmd_check(const RunConfig& c) {
  return guarded([&] {
    if (c.format == "csv") throw ConfigError("check supports json or text output");
    Resolved r = resolve(c);
    std::set<std::string> want(c.checks.begin(), c.checks.end());
    bool all = want.empty();
    auto selected = [&](const char* k) { return all || want.contains(k); };
    std::vector<Report> reports;
    std::vector<std::string> skipped;

    Twist F = build_twist(r.spec);
    if (selected("cocycle")) reports.push_back(check_cocycle(F));
    if (selected("coassoc")) reports.push_back(check_coassoc_all(F));
    if (selected("hermiticity")) reports.push_back(check_hermiticity(F));
    if (selected("jacobi")) {
      try {
        reports.push_back(check_jacobi(resolved_table(r)));
      } catch (const SectorError& e) {
        if (!all) throw;
        skipped.push_back(std::string("jacobi: ") + e.what());
      }
    }
    if (selected("realization")) {
      if (r.preset.empty()) {
        if (!all) throw ConfigError("the realization check needs a preset");
        skipped.push_back("realization: needs a preset");
      } else {
        std::optional<ParamScalar> value;
        Param p = r.preset == "iso11" ? Param::beta : Param::alpha;
        if (r.post.contains(p)) value = r.post.at(p);
        if (r.into_spec.contains(p)) value = r.into_spec.at(p);
        reports.push_back(verify_realization(r.preset, value));
      }
    }
    if (selected("adjudicate")) {
      if (r.spec.which != TwistCase::ii || !r.preset.empty()) {
        if (!all) throw ConfigError("variant adjudication applies to case ii");
      } else {
        reports.push_back(adjudicate_variants(r.spec));
      }
    }

    bool pass = true;
    for (const auto& rep : reports) pass = pass && rep.pass;
    std::ostringstream o;
    if (c.format == "json") {
      json j;
      j["selector"] = r.name;
      j["variant"] = c.variant;
      j["reports"] = json::array();
      for (const auto& rep : reports) j["reports"].push_back(rep.to_json());
      j["skipped"] = skipped;
      j["pass"] = pass;
      o << j.dump(2) << "\n";
    } else {
      o << r.name << " (order " << c.order << ", variant " << c.variant << ")\n";
      for (const auto& rep : reports) {
        o << (rep.pass ? "PASS " : "FAIL ") << rep.name << " (order " << rep.order << ")";
        if (!rep.pass) o << " residual: " << rep.residual;
        o << "\n";
        if (!rep.pass || rep.name.rfind("variant", 0) == 0)
          for (const auto& n : rep.notes) o << "  " << n << "\n";
      }
      for (const auto& s : skipped) o << "SKIP " << s << "\n";
      o << (pass ? "PASS" : "FAIL") << "\n";
    }
    return CommandResult{pass ? 0 : 1, o.str(), ""};
  });
}

CommandResult cmd_uncertainty(const RunConfig& c) {
  return guarded([&] {
    if (!c.twist_case.empty()) throw ConfigError("uncertainty needs a preset (iso2, iso11, canonical)");
    std::string preset = c.preset.empty() ? "canonical" : c.preset;
    double value = 0.1;
    for (const auto& [name, text] : c.parameters) {
      Param p = *param_from_name(name);
      if ((preset == "iso2" && p != Param::alpha) || (preset == "iso11" && p != Param::beta) || preset == "canonical")
        throw ConfigError("parameter '" + name + "' does not belong to " + preset);
      auto v = parse_scalar(text).constant_value();
      if (!v || v->im != 0) throw ConfigError("parameters." + name + " must be a real number for numeric runs");
      value = v->re.get_d();
    }
    if (preset == "canonical") value = 0.0;
    SuiteReport suite = uncertainty_suite(preset, value, c.hbar, c.grid, c.states);
    std::optional<ScanReport> scan;
    if (!c.scan_centers.empty()) {
      if (preset == "canonical") throw ConfigError("limit scan needs preset iso2 or iso11");
      scan = limit_scan(preset, value, c.hbar, c.grid, c.scan_centers, c.scan_sigma);
    }
    bool pass = suite.pass && (!scan || scan->pass);
    std::ostringstream o;
    if (c.format == "json") {
      json j;
      j["suite"] = suite.to_json();
      if (scan) j["scan"] = scan->to_json();
      j["pass"] = pass;
      o << j.dump(2) << "\n";
    } else if (c.format == "csv") {
      if (scan) {
        o << scan->csv();
      } else {
        o << "state,a,b,lhs,rhs,slack,commutator_residual,pass\n";
        char buf[256];
        for (const auto& l : suite.lines) {
          std::snprintf(buf, sizeof buf, "%zu,%s,%s,%.10e,%.10e,%.10e,%.3e,%d\n", l.state, l.a.c_str(), l.b.c_str(),
                        l.lhs, l.rhs, l.slack, l.commutator_residual, l.pass ? 1 : 0);
          o << buf;
        }
      }
    } else {
      o << suite.text();
      if (scan) {
        o << "scan " << preset << " sigma " << c.scan_sigma << "\n";
        for (const auto& n : scan->notes) o << "# " << n << "\n";
        o << (scan->pass ? "PASS" : "FAIL") << "\n";
      }
    }
    return CommandResult{pass ? 0 : 1, o.str(), ""};
  });
}

CommandResult cmd_expand(const RunConfig& c) {
  return guarded([&] {
    if (c.format == "csv") throw ConfigError("expand supports json or text output");
    Resolved r = resolve(c);
    auto g = parse_generator(c.generator);
    if (!g) throw ConfigError("unknown generator '" + c.generator + "' (P0..P3, M1..M3, N1..N3)");
    Twist F = build_twist(r.spec);
    TwistedCoproduct t = twisted_coproduct(F, AlgebraElement::generator(*g));
    bool closed = t.decomposed;
    for (const auto& piece : t.pieces) closed = closed && piece.closed;
    std::ostringstream o;
    if (c.format == "json") {
      json j{{"selector", r.name}, {"generator", c.generator}, {"order", c.order}, {"coproduct", t.str(true)},
             {"closed_form", closed}};
      o << j.dump(2) << "\n";
    } else {
      o << "D(" << c.generator << ") = " << t.str(true) << "\n";
    }
    return CommandResult{0, o.str(), ""};
  });
}

CommandResult run_command(const std::string& name, const RunConfig& c) {
  if (name == "derive") return cmd_derive(c);
  if (name == "check") return cmd_check(c);
  if (name == "uncertainty") return cmd_uncertainty(c);
  if (name == "expand") return cmd_expand(c);
  return {2, "", "error: unknown command '" + name + "'\n"};
}

}  // namespace twistforge
