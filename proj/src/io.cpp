#include "powerdiv/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace powerdiv {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "infinite" : "-infinite";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::config_error, "cannot write " + path);
  out << content;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number_or_fraction(const std::string& raw) {
  std::string t = trim(raw);
  size_t slash = t.find('/');
  try {
    if (slash != std::string::npos) {
      double num = std::stod(t.substr(0, slash));
      double den = std::stod(t.substr(slash + 1));
      if (den == 0.0) fail(errc::parse_error, "zero denominator in " + raw);
      return num / den;
    }
    size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size()) fail(errc::parse_error, "trailing characters in number: " + raw);
    return v;
  } catch (const std::invalid_argument&) {
    fail(errc::parse_error, "not a number: " + raw);
  } catch (const std::out_of_range&) {
    fail(errc::parse_error, "number out of range: " + raw);
  }
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_number_or_fraction(item));
  }
  if (out.empty()) fail(errc::parse_error, "empty number list");
  return out;
}

std::vector<long long> parse_int_list(const std::string& text) {
  std::vector<long long> out;
  for (const std::string& item : split(text, ',')) {
    std::string t = trim(item);
    if (t.empty()) continue;
    try {
      size_t pos = 0;
      long long v = std::stoll(t, &pos);
      if (pos != t.size()) fail(errc::parse_error, "trailing characters in integer: " + t);
      out.push_back(v);
    } catch (const std::invalid_argument&) {
      fail(errc::parse_error, "not an integer: " + t);
    } catch (const std::out_of_range&) {
      fail(errc::parse_error, "integer out of range: " + t);
    }
  }
  if (out.empty()) fail(errc::parse_error, "empty integer list");
  return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
  std::vector<std::string> out;
  for (const std::string& item : split(text, ',')) {
    std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

Counts read_counts(const std::string& path) {
  std::string content = read_file(path);
  std::string body = trim(content);
  if (body.empty()) fail(errc::parse_error, "empty counts file " + path);
  if (body.front() == '[') {
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_array())
      fail(errc::parse_error, "counts JSON must be an array of integers");
    Counts counts;
    for (const auto& v : j) {
      if (!v.is_number_integer() || v.get<long long>() < 0)
        fail(errc::parse_error, "counts JSON entries must be nonnegative integers");
      counts.push_back(v.get<long long>());
    }
    return counts;
  }
  std::istringstream in(content);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "cell,count")
    fail(errc::parse_error, "counts CSV must start with header `cell,count`");
  Counts counts;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    auto cols = split(t, ',');
    if (cols.size() != 2) fail(errc::parse_error, "counts CSV rows need 2 columns: " + t);
    try {
      long long c = std::stoll(trim(cols[1]));
      if (c < 0) fail(errc::parse_error, "negative count: " + t);
      counts.push_back(c);
    } catch (const std::logic_error&) {
      fail(errc::parse_error, "bad count value: " + t);
    }
  }
  if (counts.empty()) fail(errc::parse_error, "counts CSV has no data rows");
  return counts;
}

std::vector<double> parse_probs(const std::string& list_or_path) {
  std::ifstream probe(list_or_path);
  if (!probe.good()) return parse_double_list(list_or_path);
  std::string content = read_file(list_or_path);
  std::istringstream in(content);
  std::string line;
  std::vector<double> probs;
  bool header = false;
  bool first = true;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (first && t == "cell,prob") {
      header = true;
      first = false;
      continue;
    }
    first = false;
    auto cols = split(t, ',');
    if (header) {
      if (cols.size() != 2) fail(errc::parse_error, "probs CSV rows need 2 columns: " + t);
      probs.push_back(parse_number_or_fraction(cols[1]));
    } else {
      for (const auto& c : cols) {
        if (!trim(c).empty()) probs.push_back(parse_number_or_fraction(c));
      }
    }
  }
  if (probs.empty()) fail(errc::parse_error, "no probabilities in " + list_or_path);
  return probs;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::string content = read_file(path);
  std::istringstream in(content);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      fail(errc::config_error, path + ":" + std::to_string(lineno) + ": expected `key = value`");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) fail(errc::config_error, path + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

std::string distribution_to_csv(const ExactDistribution& dist) {
  std::string out = "value,prob\n";
  for (const auto& atom : dist.atoms) {
    out += format_double(atom.value);
    out += ',';
    out += format_double(atom.prob);
    out += '\n';
  }
  return out;
}

namespace {

std::string json_number(double v) {
  if (std::isinf(v) || std::isnan(v)) return std::string("\"") + format_double(v) + "\"";
  return format_double(v);
}

}  // namespace

std::string bound_report_to_json(const BoundReport& rep) {
  std::string out = "{\"value\": " + json_number(rep.value);
  out += ", \"theorem\": \"" + rep.theorem + "\"";
  out += ", \"terms\": {";
  for (size_t i = 0; i < rep.terms.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + rep.terms[i].first + "\": " + json_number(rep.terms[i].second);
  }
  out += "}, \"preconditions\": [";
  for (size_t i = 0; i < rep.preconditions.size(); ++i) {
    const auto& p = rep.preconditions[i];
    if (i) out += ", ";
    out += "{\"name\": \"" + p.name + "\", \"required\": " + json_number(p.required) +
           ", \"actual\": " + json_number(p.actual) +
           ", \"satisfied\": " + (p.satisfied ? "true" : "false") + "}";
  }
  out += "]}";
  return out;
}

}  // namespace powerdiv
