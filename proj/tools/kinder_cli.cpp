// kinder-cli: runs one experiment command and writes its JSON report.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kinder/commands.hpp"
#include "kinder/errors.hpp"

namespace {

using json = nlohmann::ordered_json;

// Parameter kinds: i integer, s string, b flag, L integer list "1,0,1",
// S string list "a,b", J JSON literal.
struct ParamSpec {
  const char* key;
  char kind;
  const char* help;
};

struct Sub {
  CLI::App* app = nullptr;
  std::vector<ParamSpec> specs;
  std::map<std::string, std::string> text;
  std::map<std::string, bool> flags;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

json convert(const ParamSpec& spec, const std::string& v) {
  try {
    switch (spec.kind) {
      case 'i': {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) break;
        return x;
      }
      case 'L': {
        json arr = json::array();
        for (const auto& part : split(v)) arr.push_back(std::stoll(part));
        return arr;
      }
      case 'S': {
        json arr = json::array();
        for (const auto& part : split(v)) arr.push_back(part);
        return arr;
      }
      case 'J':
        return json::parse(v);
      default:
        return v;
    }
  } catch (const std::exception&) {
  }
  throw kinder::InvalidArgument(std::string("bad value '") + v + "' for --" + spec.key);
}

std::string flag_name(const char* key) {
  std::string s = key;
  for (auto& ch : s) {
    if (ch == '_') ch = '-';
  }
  return "--" + s;
}

void print_error(const std::string& kind, const std::string& message, int code) {
  json e;
  e["error"] = kind;
  e["message"] = message;
  e["exit_code"] = code;
  std::cerr << e.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinder experiment runner"};
  app.fallthrough();
  app.require_subcommand(1);

  kinder::RunConfig cfg;
  std::uint64_t seed = 0, trials = 0;
  std::string params_text;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (required by stochastic commands)");
  auto* trials_opt = app.add_option("--trials", trials, "Monte Carlo trials");
  app.add_option("--out", cfg.out_path, "Write the report here instead of stdout");
  app.add_option("--cap-subgroups", cfg.cap_subgroups, "Subgroup enumeration cap");
  app.add_option("--cap-iso", cfg.cap_iso, "Largest group order for isomorphism tests");
  app.add_option("--mode", cfg.mode, "estimate | exhaustive");
  app.add_option("--workers", cfg.workers, "Worker threads (0 = all cores)");
  app.add_option("--params", params_text, "Extra parameters as a JSON object");

  const std::vector<std::pair<std::string, std::vector<ParamSpec>>> table{
      {"field-check", {{"p", 'i', "characteristic"}, {"e", 'i', "degree"}, {"modulus", 'L', "coefficients, lowest first"}}},
      {"hom",
       {{"q", 'i', "field order"}, {"a", 'i', "rows of A"}, {"s", 'i', "columns of A"}, {"b", 'i', "rows of B"},
        {"t", 'i', "columns of B"}, {"c", 'i', "number of matrices"}, {"sign", 'i', "1 or -1"},
        {"end", 'b', "use Ups = Phi"}}},
      {"witness", {{"m", 'i', "rows"}, {"n", 'i', "columns"}, {"q", 'i', "field order"}}},
      {"generic",
       {{"kind", 's', "span | end_generic | hom_pm_transpose | lambda_end | nucleus | derived_full"},
        {"q", 'i', "field order"}, {"m", 'i', ""}, {"n", 'i', ""}, {"s", 'i', ""}, {"a", 'i', ""}, {"b", 'i', ""},
        {"c", 'i', ""}, {"l", 'i', ""}, {"cap", 'i', "exhaustive cap"}}},
      {"nursery-census",
       {{"family", 's', "matrix | unitary | b2_odd | ree"}, {"a", 'i', ""}, {"c", 'i', ""}, {"q", 'i', ""},
        {"p", 'i', ""}, {"e", 'i', ""}, {"l", 'i', "dim V"}, {"relaxed", 'b', "all l-dim subspaces"},
        {"max_kinder", 'i', "cap on the number of kinder"}}},
      {"reconstruct",
       {{"family", 's', "matrix | unitary | b2_odd | ree"}, {"a", 'i', ""}, {"c", 'i', ""}, {"q", 'i', ""},
        {"p", 'i', ""}, {"e", 'i', ""}, {"count", 'i', "round trips"}}},
      {"alt-codes",
       {{"k", 'i', "length"}, {"l", 'i', "dimension"}, {"op", 's', "classes | recover | subgroup"},
        {"code", 'J', "generator rows as JSON, e.g. [[1,1,0]]"}}},
      {"suzuki-search",
       {{"e", 'i', "field degree 2e+1"}, {"cert", 's', "write the certificate here"},
        {"candidates", 'i', "candidates per greedy step"}, {"restarts", 'i', "maximum restarts"}}},
      {"suzuki-verify", {{"cert", 's', "certificate path"}}},
      {"arith",
       {{"op", 's', "legendre | factor | mu | nu | gaussian | bound | unitriangular"}, {"k", 'i', ""}, {"p", 'i', ""},
        {"n", 'i', ""}, {"l", 'i', ""}, {"q", 'i', ""}, {"d", 'i', ""}, {"e", 'i', ""}, {"r", 'i', ""},
        {"s", 'i', ""}, {"m", 'i', ""}, {"t", 'i', ""}, {"a", 'i', ""}, {"b", 'i', ""}, {"c", 'i', ""},
        {"formula", 's', "nursery_count | orbit_upper | coro_ud_lower"}}},
      {"b2-demo", {{"q", 'i', "2, 4 or 8"}, {"runs", 'i', "labelling runs"}}},
      {"verify-suite", {{"tier", 's', "fast | full"}, {"only", 'S', "comma-separated criterion ids"}}},
  };

  const std::map<std::string, std::string> about{
      {"field-check", "build a finite field and check its tables"},
      {"hom", "hom space of two random matrix systems"},
      {"witness", "End of the explicit witness system"},
      {"generic", "Monte Carlo or exhaustive genericity experiment"},
      {"nursery-census", "isomorphism classes of kinder in a nursery"},
      {"reconstruct", "recover the filtration from random kinder"},
      {"alt-codes", "binary codes and subgroups of Sym_3^k"},
      {"suzuki-search", "search for a small spanning set and certify it"},
      {"suzuki-verify", "re-check a spanning-set certificate"},
      {"arith", "valuations, orders and closed-form bounds"},
      {"b2-demo", "B2 group in characteristic 2 and its labelling"},
      {"verify-suite", "run the acceptance checks"},
  };

  std::map<std::string, Sub> subs;
  for (const auto& [name, specs] : table) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, about.at(name));
    s.specs = specs;
    for (const auto& spec : s.specs) {
      if (spec.kind == 'b') {
        s.app->add_flag(flag_name(spec.key), s.flags[spec.key], spec.help);
      } else {
        s.app->add_option(flag_name(spec.key), s.text[spec.key], spec.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kinder::kExitInvalid;
  }

  try {
    if (!params_text.empty()) {
      try {
        cfg.params = json::parse(params_text);
      } catch (const nlohmann::json::exception& ex) {
        throw kinder::InvalidArgument(std::string("--params is not JSON: ") + ex.what());
      }
    }
    if (*seed_opt) cfg.seed = seed;
    if (*trials_opt) cfg.trials = trials;
    for (auto& [name, s] : subs) {
      if (!s.app->parsed()) continue;
      cfg.command = name;
      for (const auto& spec : s.specs) {
        const auto* opt = s.app->get_option(flag_name(spec.key));
        if (!*opt) continue;
        cfg.params[spec.key] = spec.kind == 'b' ? json(s.flags[spec.key]) : convert(spec, s.text[spec.key]);
      }
    }
    const json report = kinder::run_command(cfg);
    const std::string text = report.dump(2);
    if (cfg.out_path.empty()) {
      std::cout << text << "\n";
    } else {
      std::ofstream out(cfg.out_path);
      if (!out) throw kinder::InvalidArgument("cannot write '" + cfg.out_path + "'");
      out << text << "\n";
    }
    return kinder::exit_code_for_report(report);
  } catch (const kinder::Error& ex) {
    const int code = kinder::exit_code_for(ex);
    const char* kind = code == kinder::kExitCap        ? "cap_exceeded"
                       : code == kinder::kExitProperty ? "property_violation"
                       : code == kinder::kExitInvalid  ? "invalid_config"
                                                       : "error";
    print_error(kind, ex.what(), code);
    return code;
  } catch (const std::exception& ex) {
    print_error("error", ex.what(), kinder::kExitOther);
    return kinder::kExitOther;
  }
}
