#pragma once

#include <map>
#include <string>
#include <vector>

#include "powerdiv/model.hpp"

namespace powerdiv {

// 17 significant digits: doubles round-trip exactly and output is byte-stable
// across runs and worker counts. +inf prints as "infinite".
std::string format_double(double v);

// Counts from a CSV file with header `cell,count` or a JSON array of
// nonnegative integers (detected by the leading '[').
Counts read_counts(const std::string& path);

// Probabilities from an inline comma list ("0.2,0.3,0.5") or, when the
// argument names an existing file, from a CSV with header `cell,prob` or a
// plain list of numbers.
std::vector<double> parse_probs(const std::string& list_or_path);

// Comma-separated doubles; each entry may be a plain number or a fraction
// "a/b" (so an exact 2/3 can be written on the command line).
std::vector<double> parse_double_list(const std::string& text);
std::vector<long long> parse_int_list(const std::string& text);
std::vector<std::string> parse_name_list(const std::string& text);

// Flat key-value config: `key = value` lines, '#' comments, blank lines
// ignored. Values keep their raw text; list parsing happens at the caller.
std::map<std::string, std::string> read_config(const std::string& path);

std::string distribution_to_csv(const ExactDistribution& dist);

std::string bound_report_to_json(const BoundReport& rep);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace powerdiv
