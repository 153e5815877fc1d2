#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypic/arrangement.hpp"

namespace hypic::io {

struct Input {
  Arrangement arr;
  std::optional<nlohmann::json> sheaf;  // claimed sheaf dump, checked by verify
  std::string source;
};

namespace detail {

inline int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

// Line on which each value starts, keyed by JSON pointer. The text has
// already been accepted by the real parser, so this scan can be lenient.
inline std::map<std::string, int> value_lines(const std::string& text) {
  struct Frame {
    bool array;
    int index = 0;
    std::string key;
    bool expect_key = true;
  };
  std::vector<Frame> st;
  std::map<std::string, int> lines;
  int line = 1;
  auto here = [&] {
    std::string p;
    for (auto& f : st) p += "/" + (f.array ? std::to_string(f.index) : f.key);
    lines.emplace(p, line);
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    switch (c) {
      case '\n': ++line; break;
      case ' ': case '\t': case '\r': break;
      case '{': here(); st.push_back({false, 0, "", true}); break;
      case '[': here(); st.push_back({true, 0, "", false}); break;
      case '}': case ']': if (!st.empty()) st.pop_back(); break;
      case ',':
        if (!st.empty()) {
          if (st.back().array) ++st.back().index;
          else st.back().expect_key = true;
        }
        break;
      case ':': if (!st.empty()) st.back().expect_key = false; break;
      case '"': {
        std::string s;
        for (++i; i < text.size() && text[i] != '"'; ++i) {
          if (text[i] == '\\') ++i;
          if (i < text.size()) s += text[i];
        }
        if (!st.empty() && !st.back().array && st.back().expect_key) st.back().key = s;
        else here();
        break;
      }
      default:
        here();
        while (i + 1 < text.size() && std::string(",]} \t\r\n").find(text[i + 1]) == std::string::npos) ++i;
    }
  }
  return lines;
}

class Locator {
 public:
  Locator(std::string source, const std::string& text) : source_(std::move(source)), lines_(value_lines(text)) {}
  [[noreturn]] void fail(const std::string& pointer, const std::string& what) const {
    auto it = lines_.find(pointer);
    std::string at = it == lines_.end() ? "" : ":" + std::to_string(it->second);
    throw InputError(source_ + at + ": " + what + (pointer.empty() ? "" : " (at " + pointer + ")"));
  }

 private:
  std::string source_;
  std::map<std::string, int> lines_;
};

inline Rational json_rational(const nlohmann::json& v, const std::string& ptr, const Locator& loc) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      loc.fail(ptr, e.what());
    }
  }
  if (v.is_number_float()) loc.fail(ptr, "floating-point number; write rationals as \"p/q\" strings");
  loc.fail(ptr, "expected a rational");
}

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace detail

// {"normals": [[q, ...], ...], "offsets": [q, ...], "labels": [...]}, rationals
// as integers or "p/q" strings. "dim" is optional and only cross-checked;
// "sheaf" carries a claimed sheaf dump; "name" and "comment" are ignored.
inline Input parse_json(const std::string& text, const std::string& source = "<input>") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(source + ":" + std::to_string(detail::line_of_byte(text, e.byte)) + ": " + e.what());
  }
  detail::Locator loc(source, text);
  if (!j.is_object()) loc.fail("", "top level must be an object");
  for (auto& [key, val] : j.items())
    if (key != "normals" && key != "offsets" && key != "labels" && key != "dim" && key != "sheaf" && key != "name" &&
        key != "comment")
      loc.fail("/" + key, "unknown field '" + key + "'");
  if (!j.contains("normals")) loc.fail("", "missing field 'normals'");
  const auto& jn = j["normals"];
  if (!jn.is_array()) loc.fail("/normals", "'normals' must be an array of rows");
  std::vector<Vec> normals;
  for (std::size_t i = 0; i < jn.size(); ++i) {
    std::string p = "/normals/" + std::to_string(i);
    if (!jn[i].is_array()) loc.fail(p, "each normal must be an array");
    Vec row;
    for (std::size_t k = 0; k < jn[i].size(); ++k) row.push_back(detail::json_rational(jn[i][k], p + "/" + std::to_string(k), loc));
    if (!normals.empty() && row.size() != normals.front().size())
      loc.fail(p, "normal has " + std::to_string(row.size()) + " entries, expected " + std::to_string(normals.front().size()));
    if (std::all_of(row.begin(), row.end(), [](const Rational& x) { return x.is_zero(); })) loc.fail(p, "zero normal");
    normals.push_back(std::move(row));
  }
  Vec offsets;
  if (j.contains("offsets")) {
    const auto& jo = j["offsets"];
    if (!jo.is_array()) loc.fail("/offsets", "'offsets' must be an array");
    if (jo.size() != normals.size())
      loc.fail("/offsets", "got " + std::to_string(jo.size()) + " offsets for " + std::to_string(normals.size()) + " normals");
    for (std::size_t i = 0; i < jo.size(); ++i) offsets.push_back(detail::json_rational(jo[i], "/offsets/" + std::to_string(i), loc));
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    const auto& jl = j["labels"];
    if (!jl.is_array() || jl.size() != normals.size()) loc.fail("/labels", "'labels' must hold one string per normal");
    for (std::size_t i = 0; i < jl.size(); ++i) {
      if (!jl[i].is_string()) loc.fail("/labels/" + std::to_string(i), "label must be a string");
      labels.push_back(jl[i].get<std::string>());
    }
  }
  if (j.contains("dim")) {
    if (!j["dim"].is_number_unsigned()) loc.fail("/dim", "'dim' must be a non-negative integer");
    std::size_t d = j["dim"].get<std::size_t>();
    std::size_t have = normals.empty() ? 0 : normals.front().size();
    if (d != have) loc.fail("/dim", "'dim' is " + std::to_string(d) + " but the normals have length " + std::to_string(have));
  }
  Input in;
  try {
    in.arr = Arrangement::make(std::move(normals), std::move(offsets), std::move(labels));
  } catch (const InputError& e) {
    loc.fail("/normals", e.what());
  }
  if (j.contains("sheaf")) in.sheaf = j["sheaf"];
  in.source = source;
  return in;
}

// One hyperplane per line: normal entries then the offset, comma separated.
// Blank lines and text after '#' are ignored.
inline Input parse_csv(const std::string& text, const std::string& source = "<input>") {
  std::istringstream is(text);
  std::string raw;
  std::vector<Vec> normals;
  Vec offsets;
  std::size_t width = 0;
  int lineno = 0, first = 0;
  auto fail = [&](const std::string& what) { throw InputError(source + ":" + std::to_string(lineno) + ": " + what); };
  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = detail::trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.back() == ',') fail("trailing comma");
    Vec row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        row.push_back(Rational::parse(detail::trim(cell)));
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    }
    if (row.size() < 2) fail("need at least one normal entry and an offset");
    if (width == 0) {
      width = row.size();
      first = lineno;
    } else if (row.size() != width) {
      fail(std::to_string(row.size()) + " columns, but line " + std::to_string(first) + " has " + std::to_string(width));
    }
    offsets.push_back(row.back());
    row.pop_back();
    normals.push_back(std::move(row));
  }
  Input in;
  try {
    in.arr = Arrangement::make(std::move(normals), std::move(offsets));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
  in.source = source;
  return in;
}

inline Input load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError(path + ": cannot open file");
  std::stringstream ss;
  ss << f.rdbuf();
  std::string text = ss.str();
  bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  return csv ? parse_csv(text, path) : parse_json(text, path);
}

}  // namespace hypic::io
