#include "injphase/csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace injphase {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const Table& table, const std::vector<std::string>& manifest) {
  for (const auto& line : manifest) out << "# " << line << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::logic_error("write_csv: row width does not match header in " + table.name);
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

std::vector<std::string> write_tables(const std::string& prefix, const std::vector<Table>& tables,
                                      const std::vector<std::string>& manifest) {
  std::vector<std::string> written;
  try {
    for (const auto& t : tables) {
      const std::string path = prefix + "_" + t.name + ".csv";
      const auto parent = std::filesystem::path(path).parent_path();
      if (!parent.empty()) std::filesystem::create_directories(parent);
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
      written.push_back(path);
      write_csv(f, t, manifest);
      f.close();
      if (!f) throw std::runtime_error("failed writing '" + path + "'");
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
  return written;
}

}  // namespace injphase
