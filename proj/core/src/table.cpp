#include "stratmc/table.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "stratmc/error.hpp"
#include "stratmc/format.hpp"

namespace stratmc {

namespace {

std::string optional_number(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string{};
}

std::uint64_t parse_unsigned(const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorCode::ConfigInvalid, "not an unsigned integer: '" + s + "'");
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const ResultRow& r : rows) {
    out += r.method + ',' + r.alloc + ',' + r.payoff + ',' + format_double(r.strike) + ',' +
           optional_number(r.barrier) + ',' + format_double(r.price) + ',' +
           format_double(r.variance) + ',' + optional_number(r.time_ratio) + ',' +
           std::to_string(r.n_samples) + ',' + std::to_string(r.strata) + ',' +
           std::to_string(r.seed) + '\n';
  }
  return out;
}

std::string to_json(const std::vector<ResultRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ResultRow& r : rows) {
    nlohmann::ordered_json j;
    j["method"] = r.method;
    j["alloc"] = r.alloc;
    j["payoff"] = r.payoff;
    j["strike"] = r.strike;
    j["barrier"] = r.barrier ? nlohmann::ordered_json(*r.barrier) : nlohmann::ordered_json();
    j["price"] = r.price;
    j["variance"] = r.variance;
    j["time_ratio"] = r.time_ratio ? nlohmann::ordered_json(*r.time_ratio) : nlohmann::ordered_json();
    j["n_samples"] = r.n_samples;
    j["strata"] = r.strata;
    j["seed"] = r.seed;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + '\n';
}

std::vector<ResultRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw Error(ErrorCode::ConfigInvalid, "CSV header does not match the result schema");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 11)
      throw Error(ErrorCode::ConfigInvalid, "CSV row has " + std::to_string(f.size()) + " fields");
    ResultRow r;
    r.method = f[0];
    r.alloc = f[1];
    r.payoff = f[2];
    r.strike = parse_double(f[3]);
    if (!f[4].empty()) r.barrier = parse_double(f[4]);
    r.price = parse_double(f[5]);
    r.variance = parse_double(f[6]);
    if (!f[7].empty()) r.time_ratio = parse_double(f[7]);
    r.n_samples = static_cast<std::size_t>(parse_unsigned(f[8]));
    r.strata = static_cast<std::size_t>(parse_unsigned(f[9]));
    r.seed = parse_unsigned(f[10]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit_table(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path) {
  if (rows.empty()) throw Error(ErrorCode::IoError, "refusing to write an empty table");
  const std::string text = format == OutputFormat::Csv ? to_csv(rows) : to_json(rows);
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    if (!std::cout) throw Error(ErrorCode::IoError, "failed writing to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

}  // namespace stratmc
