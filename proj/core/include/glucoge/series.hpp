#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace glucoge {

/// Aligned 15-minute records for one patient. Step k (1-based) lives at
/// index k-1 of every column; k itself is implicit and contiguous.
struct PatientSeries {
  std::string patient_id;
  std::vector<double> gl;  // mg/dl
  std::vector<double> ch;  // carbohydrate units
  std::vector<double> is;  // short-effect insulin units
  std::vector<double> il;  // long-effect insulin units

  std::size_t size() const noexcept { return gl.size(); }
  bool empty() const noexcept { return gl.empty(); }

  /// Throws std::invalid_argument unless columns are equally long and
  /// non-empty, GL > 0 and CH, IS, IL >= 0.
  void validate() const;

  friend bool operator==(const PatientSeries&, const PatientSeries&) = default;
};

}  // namespace glucoge
