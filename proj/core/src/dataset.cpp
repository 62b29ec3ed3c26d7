#include "glucoge/dataset.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace glucoge {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  for (;;) {
    auto comma = line.find(',', begin);
    fields.push_back(trim(line.substr(begin, comma == std::string_view::npos ? line.npos : comma - begin)));
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return fields;
}

template <class T>
T parse_number(std::string_view field, std::size_t row, std::string_view column) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw DatasetError(DatasetError::Kind::parse_error, row,
                       "row " + std::to_string(row) + ": cannot parse " + std::string(column) + " value '" +
                           std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(DatasetError::Kind kind) {
  switch (kind) {
    case DatasetError::Kind::missing_column: return "MissingColumn";
    case DatasetError::Kind::non_contiguous_index: return "NonContiguousIndex";
    case DatasetError::Kind::negative_input: return "NegativeInput";
    case DatasetError::Kind::parse_error: return "ParseError";
    case DatasetError::Kind::io_error: return "IoError";
  }
  return "?";
}

std::string format_double(double v) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

PatientSeries parse_patient(std::string_view text, std::string patient_id) {
  static constexpr std::array<std::string_view, 5> columns{"k", "GL", "CH", "IS", "IL"};

  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    lines.push_back(text.substr(pos, eol - pos));
    pos = eol + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw DatasetError(DatasetError::Kind::parse_error, 0, "dataset is empty");

  auto header = split_fields(lines.front());
  if (!header.empty() && header.front().starts_with("\xEF\xBB\xBF")) header.front().remove_prefix(3);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c >= header.size() || header[c] != columns[c]) {
      throw DatasetError(DatasetError::Kind::missing_column, 0,
                         "header must be '" + std::string(kDatasetHeader) + "' (missing " +
                             std::string(columns[c]) + ")");
    }
  }
  if (header.size() > columns.size()) {
    throw DatasetError(DatasetError::Kind::parse_error, 0, "unexpected extra header columns");
  }
  if (lines.size() == 1) throw DatasetError(DatasetError::Kind::parse_error, 0, "dataset has no data rows");

  PatientSeries series;
  series.patient_id = std::move(patient_id);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::size_t row = r;
    auto fields = split_fields(lines[r]);
    if (fields.size() < columns.size()) {
      throw DatasetError(DatasetError::Kind::missing_column, row,
                         "row " + std::to_string(row) + ": expected 5 fields, found " +
                             std::to_string(fields.size()));
    }
    if (fields.size() > columns.size()) {
      throw DatasetError(DatasetError::Kind::parse_error, row, "row " + std::to_string(row) + ": too many fields");
    }
    const auto k = parse_number<long long>(fields[0], row, "k");
    if (k != static_cast<long long>(row)) {
      throw DatasetError(DatasetError::Kind::non_contiguous_index, row,
                         "row " + std::to_string(row) + ": expected k=" + std::to_string(row) + ", found " +
                             std::to_string(k));
    }
    const auto gl = parse_number<double>(fields[1], row, "GL");
    const auto ch = parse_number<double>(fields[2], row, "CH");
    const auto is = parse_number<double>(fields[3], row, "IS");
    const auto il = parse_number<double>(fields[4], row, "IL");
    if (!(gl > 0.0)) {
      throw DatasetError(DatasetError::Kind::negative_input, row,
                         "row " + std::to_string(row) + ": GL must be positive");
    }
    if (!(ch >= 0.0) || !(is >= 0.0) || !(il >= 0.0)) {
      throw DatasetError(DatasetError::Kind::negative_input, row,
                         "row " + std::to_string(row) + ": CH, IS and IL must be non-negative");
    }
    series.gl.push_back(gl);
    series.ch.push_back(ch);
    series.is.push_back(is);
    series.il.push_back(il);
  }
  return series;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(DatasetError::Kind::io_error, 0, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError(DatasetError::Kind::io_error, 0, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DatasetError(DatasetError::Kind::io_error, 0, "write failed for " + path.string());
}

PatientSeries load_patient(const std::filesystem::path& path) {
  return parse_patient(read_text_file(path), path.stem().string());
}

std::string format_patient(const PatientSeries& series) {
  std::string out(kDatasetHeader);
  out += '\n';
  for (std::size_t i = 0; i < series.size(); ++i) {
    out += std::to_string(i + 1);
    for (double v : {series.gl[i], series.ch[i], series.is[i], series.il[i]}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

void save_patient(const PatientSeries& series, const std::filesystem::path& path) {
  write_text_file(path, format_patient(series));
}

}  // namespace glucoge
