#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace injphase {

/// Numeric result table. `summary` tables are the ones a sweep aggregates.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  bool summary = false;
};

/// Shortest text that reads back to the same double, locale independent.
std::string format_number(double v);

/// Writes '#'-prefixed manifest lines, the header row and the rows, with '\n'
/// line endings.
void write_csv(std::ostream& out, const Table& table, const std::vector<std::string>& manifest);

/// Writes every table to "<prefix>_<name>.csv". If any write fails, files
/// already written by this call are removed and the error is rethrown.
std::vector<std::string> write_tables(const std::string& prefix, const std::vector<Table>& tables,
                                      const std::vector<std::string>& manifest);

}  // namespace injphase
