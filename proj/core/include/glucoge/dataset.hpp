#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "glucoge/series.hpp"

namespace glucoge {

class DatasetError : public std::runtime_error {
 public:
  enum class Kind { missing_column, non_contiguous_index, negative_input, parse_error, io_error };

  /// `row` is the 1-based data row (0 for the header or the file itself).
  DatasetError(Kind kind, std::size_t row, const std::string& what)
      : std::runtime_error(what), kind_(kind), row_(row) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t row() const noexcept { return row_; }

 private:
  Kind kind_;
  std::size_t row_;
};

std::string_view to_string(DatasetError::Kind kind);

inline constexpr std::string_view kDatasetHeader = "k,GL,CH,IS,IL";

/// Parses `k,GL,CH,IS,IL` text. k must run 1, 2, 3, ... without gaps;
/// GL must be positive and CH, IS, IL non-negative.
PatientSeries parse_patient(std::string_view text, std::string patient_id);

/// Loads a dataset file; the patient id is the file stem.
PatientSeries load_patient(const std::filesystem::path& path);

/// Writes values with the shortest representation that reads back to the
/// same double, so load(save(s)) == s.
std::string format_patient(const PatientSeries& series);
void save_patient(const PatientSeries& series, const std::filesystem::path& path);

/// Reads a whole file; throws DatasetError(io_error).
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Shortest round-trip decimal text of a double.
std::string format_double(double v);

}  // namespace glucoge
