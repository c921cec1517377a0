// cbsets: command-line front end. One JSON object per line on stdout.
//
// Exit codes: 0 ok, 1 a check failed, 2 usage / bad input, 3 oracle inconsistency.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbsets/blocks.hpp"
#include "cbsets/cbrank.hpp"
#include "cbsets/family.hpp"
#include "cbsets/norming.hpp"
#include "cbsets/ordinal.hpp"
#include "cbsets/seqspace.hpp"
#include "cbsets/suites.hpp"

using nlohmann::json;
using namespace cbsets;

namespace {

constexpr int kOk = 0, kCheckFailed = 1, kUsage = 2, kInconsistent = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  std::string format = "json";

  void emit(const std::string& op, json inputs, json result, double ms, json extra = json::object()) const {
    json j = {{"op", op}, {"inputs", std::move(inputs)}, {"result", std::move(result)}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    j["timing_ms"] = ms;
    if (format == "tsv") {
      const json flat = j["result"].flatten();
      for (const auto& [k, v] : flat.items())
        std::cout << op << '\t' << (k.empty() ? "/" : k) << '\t' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    } else {
      std::cout << j.dump() << '\n';
    }
  }
};

json cert_json(const MembershipCert& c) {
  static const char* kinds[] = {"trivial", "blocks", "limit", "capacity"};
  json j = {{"kind", kinds[static_cast<int>(c.kind)]}, {"set", to_string(c.set)}, {"level", to_string(c.level)}};
  if (c.kind == MembershipCert::Kind::Limit) j["resolved"] = to_string(c.resolved);
  if (!c.blocks.empty()) {
    json b = json::array();
    for (const auto& x : c.blocks) b.push_back(to_string(x));
    j["blocks"] = b;
  }
  if (!c.children.empty()) {
    json ch = json::array();
    for (const auto& x : c.children) ch.push_back(cert_json(x));
    j["children"] = ch;
  }
  return j;
}

// "schreier" or "af:<f>:<beta>"; beta never contains ':'.
FamilyHandle parse_family(const std::string& text, GrowthFn* f_out = nullptr, Ordinal* beta_out = nullptr) {
  GrowthFn f = GrowthFn::identity();
  Ordinal beta = Ordinal::finite(1);
  if (text != "schreier") {
    const auto cut = text.rfind(':');
    if (!text.starts_with("af:") || cut <= 3) throw UsageError("family must be 'schreier' or 'af:<f>:<beta>'");
    f = GrowthFn::parse(text.substr(3, cut - 3));
    beta = parse_cnf(text.substr(cut + 1));
  }
  if (f_out) *f_out = f;
  if (beta_out) *beta_out = beta;
  return af_handle(f, beta);
}

FinSet parse_candidates(const std::string& text, std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (text == "even" || text == "odd" || text == "all") {
    for (std::uint64_t x = 1; x <= n; ++x)
      if (text == "all" || (x % 2 == 0) == (text == "even")) out.push_back(x);
    return FinSet::from_sorted(out);
  }
  return FinSet::parse(text);
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Config values become option defaults, so explicit flags still win.
void apply_config(CLI::App& app, const std::map<std::string, std::string>& kv) {
  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) {
    for (const auto& [k, v] : kv)
      if (auto* opt = sub->get_option_no_throw("--" + k)) opt->default_val(v);
    apply_config(*sub, kv);
  }
}

template <class F>
double timed(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

json block_json(const Block& b) {
  json j = {{"beta", to_string(b.beta)},
            {"log_size", b.log_size},
            {"min_supp", b.min_supp()},
            {"complete", b.complete},
            {"window", b.window},
            {"materialized", b.coords.size()},
            {"level", to_string(b.tree.effective)},
            {"children", b.tree.children.size()},
            {"p", b.tree.p},
            {"log_p", b.tree.log_p}};
  if (b.complete) {
    j["max_supp"] = b.max_supp();
    j["mass"] = std::exp(b.tree.log_mass);
  }
  if (b.coords.size() <= 64) j["vec"] = format_vec(b.to_vec());
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfinite admissible families and sequence-space norms"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  std::uint64_t seed = 1;
  std::string config;
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--format", out.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}))->capture_default_str();
  app.add_option("--config", config, "key=value defaults (env CBSETS_CONFIG)");

  int code = kOk;
  std::function<void()> action;

  // member
  std::string f_text = "id", beta_text = "1", set_text;
  int bound_m = -1;
  auto* member = app.add_subcommand("member", "A in A^f_beta, with certificate");
  member->add_option("--f", f_text, "growth function")->capture_default_str();
  member->add_option("--beta", beta_text, "ordinal in CNF")->capture_default_str();
  member->add_option("--set", set_text, "comma-separated increasing integers")->required();
  member->add_option("--bound", bound_m, "test A^f_{beta,m}: at most 3^m blocks");
  member->callback([&] {
    action = [&] {
      const GrowthFn f = GrowthFn::parse(f_text);
      const Ordinal beta = parse_cnf(beta_text);
      const FinSet a = FinSet::parse(set_text);
      json inputs = {{"f", to_string(f)}, {"beta", to_string(beta)}, {"set", to_string(a)}};
      json result;
      AdmissibleFamily fam(f);
      const double ms = timed([&] {
        if (bound_m >= 0) {
          inputs["bound"] = bound_m;
          result = {{"member", fam.is_member_bounded(a, beta, static_cast<unsigned>(bound_m))}};
          return;
        }
        const auto r = fam.is_member(a, beta);
        result = {{"member", r.member}};
        if (r.certificate) {
          const bool ok = verify_certificate(*r.certificate, f);
          result["certificate"] = cert_json(*r.certificate);
          result["certificate_verified"] = ok;
          if (!ok) code = kInconsistent;
        }
      });
      out.emit("member", inputs, result, ms);
    };
  });

  // rank
  std::string family_text = "schreier";
  unsigned cap = kDefaultDerivedCap;
  auto* rank = app.add_subcommand("rank", "finite Cantor-Bendixson rank of a member");
  rank->add_option("--family", family_text, "schreier | af:<f>:<beta>")->capture_default_str();
  rank->add_option("--set", set_text, "member set")->required();
  rank->add_option("--cap", cap, "largest derivative order examined")->capture_default_str();
  rank->callback([&] {
    action = [&] {
      const FamilyHandle h = parse_family(family_text);
      const FinSet a = FinSet::parse(set_text);
      json result;
      const double ms = timed([&] {
        const auto r = rank_finite(h, a, cap);
        result = {{"at_least_cap", r.at_least_cap}};
        if (!r.at_least_cap) result["rank"] = r.rank;
      });
      out.emit("rank", {{"family", h.description}, {"set", to_string(a)}, {"cap", cap}}, result, ms);
    };
  });

  // extract
  std::uint64_t universe = 30;
  std::string c_text = "even";
  std::size_t min_size = 1;
  auto* ext = app.add_subcommand("extract", "desk-scale extraction of B and f");
  ext->add_option("--beta", beta_text, "finite level <= 3")->capture_default_str();
  ext->add_option("--universe", universe, "truncate K to [1..N]")->capture_default_str();
  ext->add_option("--c", c_text, "even | odd | all | explicit set")->capture_default_str();
  ext->add_option("--family", family_text, "schreier | af:<f>:<beta>")->capture_default_str();
  ext->add_option("--min-size", min_size, "fail if B is smaller")->capture_default_str();
  ext->callback([&] {
    action = [&] {
      const FamilyHandle h = truncate(parse_family(family_text), universe);
      const Ordinal beta = parse_cnf(beta_text);
      const FinSet c = parse_candidates(c_text, universe);
      json result;
      const double ms = timed([&] {
        ExtractOptions opt;
        opt.min_size = min_size;
        const auto r = extract(h, beta, c, opt);
        json steps = json::array();
        for (const auto& s : r.transcript)
          steps.push_back({{"rule", s.rule}, {"depth", s.depth}, {"c", s.c}, {"m", s.m}, {"universe", to_string(s.universe)}});
        result = {{"b", to_string(r.b)}, {"f", to_string(r.f)}, {"verified", r.verified},
                  {"replayed", r.replayed}, {"transcript", steps}};
        if (!r.verified) code = kCheckFailed;
      });
      out.emit("extract",
               {{"family", h.description}, {"beta", to_string(beta)}, {"universe", universe}, {"c", to_string(c)}},
               result, ms);
    };
  });

  // norm
  std::string space_text = "lp:2", vec_text;
  bool dual = false;
  auto* nrm = app.add_subcommand("norm", "norm (or dual norm) of a finitely supported vector");
  nrm->add_option("--space", space_text, "lp:<p> | linf | orlicz:<M> | weak:<p> | marc:<p>:<rho>")->capture_default_str();
  nrm->add_option("--vec", vec_text, "value@coordinate list")->required();
  nrm->add_flag("--dual", dual, "dual norm instead");
  nrm->callback([&] {
    action = [&] {
      const SymNormSpec space = SymNormSpec::parse(space_text);
      const Vec v = parse_vec(vec_text);
      double value = 0;
      const double ms = timed([&] { value = dual ? dual_norm(v, space) : norm(v, space); });
      out.emit("norm", {{"space", space.to_string()}, {"vec", format_vec(v)}, {"dual", dual}}, value, ms);
    };
  });

  // deltas
  double eta = 0.5, xi = -1, eps = -1;
  unsigned count = 8;
  auto* deltas = app.add_subcommand("deltas", "level sequence delta_n, or delta(eps) with --xi/--eps");
  deltas->add_option("--space", space_text, "orlicz:<M> (any space with --xi/--eps)")->capture_default_str();
  deltas->add_option("--eta", eta, "")->capture_default_str();
  deltas->add_option("--count", count, "")->capture_default_str();
  deltas->add_option("--xi", xi, "");
  deltas->add_option("--eps", eps, "");
  deltas->callback([&] {
    action = [&] {
      const SymNormSpec space = SymNormSpec::parse(space_text);
      json inputs = {{"space", space.to_string()}};
      json result;
      const double ms = timed([&] {
        if (xi > 0 || eps > 0) {
          if (!(xi > 0 && eps > 0)) throw UsageError("--xi and --eps go together");
          inputs["xi"] = xi;
          inputs["eps"] = eps;
          const auto d = delta_of_eps(space, xi, eps);
          result = {{"k0", d.k0}, {"delta", d.delta}};
          return;
        }
        if (space.kind != SymNormSpec::Kind::Orlicz) throw UsageError("level sequences need an orlicz space");
        inputs["eta"] = eta;
        inputs["count"] = count;
        const auto ds = delta_sequence(space.m, eta, count);
        json verified = json::array();
        for (unsigned n = 1; n <= ds.size(); ++n) {
          const bool ok = verify_delta(space.m, eta, n, ds[n - 1]);
          verified.push_back(ok);
          if (!ok) code = kInconsistent;
        }
        result = {{"delta", ds}, {"verified", verified}};
      });
      out.emit("deltas", inputs, result, ms);
    };
  });

  // blocks
  auto* blocks = app.add_subcommand("blocks", "level-beta blocks");
  blocks->require_subcommand(1);
  std::string m_text = "pow:2", s_text = "dec10", b_text = "even";
  double size = 1.0;
  std::uint64_t start = 2, window = std::uint64_t{1} << 16;
  std::size_t samples = 1000;
  f_text = "pow4";
  auto add_quad = [&](CLI::App* sub) {
    sub->add_option("--f", f_text, "growth function")->capture_default_str();
    sub->add_option("--M", m_text, "Orlicz function")->capture_default_str();
    sub->add_option("--S", s_text, "scalar levels: dec10 | dec:<base>")->capture_default_str();
    sub->add_option("--B", b_text, "ground set: even | odd | all | ap:<first>:<step>")->capture_default_str();
    sub->add_option("--window", window, "largest materialized coordinate")->capture_default_str();
    sub->add_option("--beta", beta_text, "level")->capture_default_str();
  };
  auto quad = [&] {
    BlockQuadruple q;
    q.f = GrowthFn::parse(f_text);
    q.m = OrliczFn::parse(m_text);
    q.s = Scale::parse(s_text);
    q.b = GroundSet::parse(b_text);
    q.window = window;
    return q;
  };
  auto quad_json = [&](const BlockQuadruple& q) {
    return json{{"f", to_string(q.f)}, {"M", q.m.to_string()}, {"S", q.s.to_string()}, {"B", q.b.to_string()},
                {"window", q.window}};
  };

  auto* build = blocks->add_subcommand("build", "build one block");
  add_quad(build);
  build->add_option("--size", size, "Orlicz mass a")->capture_default_str();
  build->add_option("--start", start, "support starts at the first element of B >= start")->capture_default_str();
  build->callback([&] {
    action = [&] {
      const auto q = quad();
      const Ordinal beta = parse_cnf(beta_text);
      json result;
      const double ms = timed([&] { result = block_json(build_block(q, beta, size, start)); });
      json inputs = quad_json(q);
      inputs["beta"] = to_string(beta);
      inputs["size"] = size;
      inputs["start"] = start;
      out.emit("blocks.build", inputs, result, ms);
    };
  });

  auto* phib = blocks->add_subcommand("phibound", "Phi(x chi_A) against 2a f(min A)/f(min supp x)^2");
  add_quad(phib);
  phib->add_option("--size", size, "Orlicz mass a")->capture_default_str();
  phib->add_option("--start", start, "")->capture_default_str();
  phib->add_option("--set", set_text, "A in A^f_beta, min A < min supp x")->required();
  phib->callback([&] {
    action = [&] {
      const auto q = quad();
      const Ordinal beta = parse_cnf(beta_text);
      const FinSet a = FinSet::parse(set_text);
      json result;
      const double ms = timed([&] {
        const Block x = build_block(q, beta, size, start);
        const auto r = phi_bound_check(x, a, q);
        result = {{"lhs", r.lhs}, {"rhs", r.rhs}, {"log_lhs", r.log_lhs}, {"log_rhs", r.log_rhs},
                  {"log_margin", r.log_rhs - r.log_lhs}, {"ok", r.ok}};
        if (!r.ok) code = kCheckFailed;
      });
      json inputs = quad_json(q);
      inputs["beta"] = to_string(beta);
      inputs["size"] = size;
      inputs["start"] = start;
      inputs["set"] = to_string(a);
      out.emit("blocks.phibound", inputs, result, ms);
    };
  });

  auto* wit = blocks->add_subcommand("witness", "sequence x_1 < ... < x_j with bounded restrictions and divergent sum");
  add_quad(wit);
  wit->add_option("--eta", eta, "")->capture_default_str();
  wit->add_option("--samples", samples, "sampled A in A^f_beta")->capture_default_str();
  wit->callback([&] {
    action = [&] {
      const auto q = quad();
      const Ordinal beta = parse_cnf(beta_text);
      json result;
      const double ms = timed([&] {
        const auto r = main_witness(q.m, eta, beta, q, samples, seed);
        result = {{"precondition", r.precondition}, {"witness", r.witness}};
        if (!r.reason.empty()) result["reason"] = r.reason;
        if (r.precondition) {
          result.update({{"theta", r.theta}, {"j", r.j}, {"complete_blocks", r.complete_blocks},
                         {"samples", r.samples}, {"violations", r.violations},
                         {"max_restricted_phi", r.max_restricted_phi}, {"sum_lower", r.sum_lower},
                         {"sum_exact_complete", r.sum_exact_complete},
                         {"margin_i", 1.0 - r.max_restricted_phi}, {"margin_ii", r.sum_lower - 1.0}});
          if (r.first_violation) result["first_violation"] = to_string(*r.first_violation);
        }
      });
      json inputs = quad_json(q);
      inputs["beta"] = to_string(beta);
      inputs["eta"] = eta;
      inputs["samples"] = samples;
      inputs["seed"] = seed;
      out.emit("blocks.witness", inputs, result, ms);
    };
  });

  // check
  std::vector<std::string> suites;
  bool list = false;
  auto* check = app.add_subcommand("check", "run property suites");
  check->add_option("--suite", suites, "suite name, module prefix (e.g. family) or 'all'");
  check->add_flag("--list", list, "list suite names");
  check->callback([&] {
    action = [&] {
      if (list) {
        out.emit("check.list", json::object(), suite_names(), 0);
        return;
      }
      if (suites.empty()) throw UsageError("--suite is required");
      std::vector<std::string> chosen;
      for (const auto& want : suites) {
        bool any = false;
        for (const auto& n : suite_names())
          if (want == "all" || n == want || n.starts_with(want + ".")) {
            chosen.push_back(n);
            any = true;
          }
        if (!any) throw UsageError("unknown suite '" + want + "'");
      }
      for (const auto& n : chosen) {
        SuiteResult r;
        const double ms = timed([&] { r = run_suite(n, seed); });
        json result = {{"checked", r.checked}, {"failed", r.failed}, {"passed", r.passed()}};
        if (r.first_failure) result["first_failure"] = *r.first_failure;
        for (const auto& [k, v] : r.metrics) result["metrics"][k] = v;
        out.emit("check", {{"suite", n}, {"seed", seed}}, result, ms);
        if (!r.passed()) code = kCheckFailed;
      }
    };
  });

  try {
    // Config path: --config wins over the environment.
    for (int i = 1; i + 1 < argc; ++i)
      if (std::string(argv[i]) == "--config") config = argv[i + 1];
    if (config.empty())
      if (const char* env = std::getenv("CBSETS_CONFIG"); env && *env) config = env;
    if (!config.empty()) apply_config(app, read_config(config));
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (action) action();
  } catch (const OracleInconsistency& e) {
    std::cerr << "oracle inconsistency: " << e.what() << '\n';
    return kInconsistent;
  } catch (const OptimizerDisagreement& e) {
    std::cerr << "oracle inconsistency: " << e.what() << '\n';
    return kInconsistent;
  } catch (const NetValidationFailed& e) {
    std::cerr << "oracle inconsistency: " << e.what() << '\n';
    return kInconsistent;
  } catch (const std::exception& e) {
    // Parse errors, violated preconditions, infeasible blocks.
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return code;
}
