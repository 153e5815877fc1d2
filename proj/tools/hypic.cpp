// hypic: command-line front end. Exit codes: 0 success, 2 invariant failure,
// 3 input error, 1 internal error.
#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hypic/hypic.hpp"

namespace {

using hypic::report::Json;

constexpr int kOk = 0, kInternal = 1, kInvariant = 2, kInput = 3;

const std::vector<std::string> kCommands{"flats", "ih", "mes", "decompose", "morse", "gmes", "verify"};

struct RunConfig {
  std::string input;
  int degree = -1;
  std::string order;
  std::string format = "json";
  std::vector<std::string> commands;
  std::uint64_t seed = 1;
  bool force = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string t;
  while (std::getline(ss, t, sep))
    if (!t.empty()) out.push_back(t);
  return out;
}

std::vector<int> parse_order(const std::string& text, std::size_t n) {
  if (text.empty()) return hypic::default_order(n);
  std::vector<int> sigma;
  for (auto& tok : split(text, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      sigma.push_back(v - 1);
    } catch (const std::exception&) {
      throw hypic::InputError("--order: '" + tok + "' is not a hyperplane number");
    }
  }
  try {
    hypic::check_order(sigma, n);
  } catch (const std::invalid_argument&) {
    throw hypic::InputError("--order must list each of 1.." + std::to_string(n) + " exactly once");
  }
  return sigma;
}

// --- table rendering, derived from the JSON report ---

std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_object() && v.contains("dims")) {
    std::string s = "(";
    for (std::size_t i = 0; i < v["dims"].size(); ++i) s += (i ? "," : "") + v["dims"][i].dump();
    return s + ")";
  }
  if (v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); })) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + cell(v[i]);
    return s + "]";
  }
  return v.dump();
}

bool tabular(const Json& v) {
  return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_object(); });
}

void render(const Json& j, std::ostream& os, const std::string& pad) {
  for (auto& [key, v] : j.items()) {
    if (v.is_object() && !v.contains("dims")) {
      os << pad << key << ":\n";
      render(v, os, pad + "  ");
    } else if (tabular(v)) {
      os << pad << key << ":\n";
      std::vector<std::string> cols;
      for (auto& [k, unused] : v.front().items()) cols.push_back(k);
      std::stable_partition(cols.begin(), cols.end(),
                            [](const std::string& k) { return k == "name" || k == "element" || k == "flat"; });
      std::vector<std::vector<std::string>> rows{cols};
      for (auto& row : v) {
        std::vector<std::string> r;
        for (auto& c : cols) r.push_back(row.contains(c) ? cell(row[c]) : "");
        rows.push_back(r);
      }
      std::vector<std::size_t> w(cols.size(), 0);
      for (auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) w[c] = std::max(w[c], r[c].size());
      for (auto& r : rows) {
        std::string line = pad + "  ";
        for (std::size_t c = 0; c < r.size(); ++c) line += r[c] + std::string(w[c] - r[c].size() + 2, ' ');
        line.erase(line.find_last_not_of(' ') + 1);
        os << line << "\n";
      }
    } else {
      os << pad << key << ": " << cell(v) << "\n";
    }
  }
}

// --- commands ---

int run(const RunConfig& cfg) {
  auto in = hypic::io::load(cfg.input);
  const auto& arr = in.arr;
  int D = cfg.degree < 0 ? hypic::default_degree(arr) : cfg.degree;
  if (D % 2 || D < 2 * static_cast<int>(arr.d))
    throw hypic::InputError("--degree must be even and at least 2 * rank = " + std::to_string(2 * arr.d));
  auto sigma = parse_order(cfg.order, arr.size());
  for (auto& c : cfg.commands)
    if (std::find(kCommands.begin(), kCommands.end(), c) == kCommands.end())
      throw hypic::InputError("unknown command '" + c + "'");

  Json out;
  int status = kOk;
  auto fail_if = [&](bool bad) {
    if (bad) status = std::max(status, kInvariant);
  };
  std::optional<hypic::MesData> mes;
  auto mes_data = [&]() -> const hypic::MesData& {
    if (!mes) mes = hypic::mes_of(arr, D);
    return *mes;
  };
  for (auto& c : cfg.commands) {
    if (c == "flats") {
      out[c] = hypic::report::flats(arr, sigma);
    } else if (c == "ih") {
      out[c] = hypic::report::ih(arr, sigma, D);
    } else if (c == "mes") {
      auto r = hypic::report::mes(mes_data());
      fail_if(!r.pure || !r.degree_check);
      out[c] = r;
    } else if (c == "decompose") {
      auto r = hypic::report::decompose(arr, D);
      fail_if(!r.failure.empty());
      out[c] = r;
    } else if (c == "morse") {
      auto r = hypic::report::morse(arr, mes_data());
      fail_if(r.simple && !r.certified);
      out[c] = r;
    } else if (c == "gmes") {
      auto r = hypic::report::gmes(arr, D, cfg.force);
      if (!r.unimodular)
        std::cerr << "hypic: WARNING: " << r.warning << "\n";
      else
        fail_if(!r.passed);
      out[c] = r;
    } else if (c == "verify") {
      hypic::VerifyOptions o{D, sigma, cfg.seed, cfg.force};
      auto r = hypic::run_verify(in, o);
      fail_if(!r.passed);
      out[c] = r;
      for (auto& k : r.checks)
        if (k.status == "fail") std::cerr << "hypic: invariant failed: " << k.name << ": " << k.detail << "\n";
    }
  }
  if (cfg.format == "table")
    render(out, std::cout, "");
  else
    std::cout << out.dump(2) << "\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intersection cohomology invariants of rational hyperplane arrangements"};
  RunConfig cfg;
  std::vector<std::string> positional;
  std::string command_flag;
  app.add_option("commands", positional, "flats | ih | mes | decompose | morse | gmes | verify");
  app.add_option("--command", command_flag, "comma-separated commands (alternative to positional)");
  app.add_option("-i,--input", cfg.input, "arrangement file (.json or .csv)")->required();
  app.add_option("-D,--degree", cfg.degree, "truncation degree D (even, at least 2 * rank; default 2 * rank + 4)");
  app.add_option("--order", cfg.order, "hyperplane ordering for broken circuits, e.g. 3,1,2");
  app.add_option("--format", cfg.format, "json or table")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--seed", cfg.seed, "seed for the random orderings used by verify");
  app.add_flag("--force-nonunimodular", cfg.force, "run gmes on non-unimodular input (results not meaningful)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  for (auto& p : positional)
    for (auto& c : split(p, ',')) cfg.commands.push_back(c);
  for (auto& c : split(command_flag, ',')) cfg.commands.push_back(c);
  if (cfg.commands.empty()) {
    std::cerr << "hypic: error: no command given\n" << app.help();
    return kInput;
  }
  if (cfg.force)
    std::cerr << "hypic: WARNING: --force-nonunimodular: GMES conclusions do not apply to non-unimodular arrangements\n";
  try {
    return run(cfg);
  } catch (const hypic::NotUnimodularError& e) {
    std::cerr << "hypic: refused: " << e.what() << "\n";
    return kInput;
  } catch (const hypic::InputError& e) {
    std::cerr << "hypic: input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "hypic: input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "hypic: internal error: " << e.what() << "\n";
    return kInternal;
  }
}
