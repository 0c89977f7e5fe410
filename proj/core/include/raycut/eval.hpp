#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "raycut/volume.hpp"

namespace raycut {

/// 2|A and B| / (|A| + |B|); 1.0 when both masks are empty.
double dice(const MaskVolume& a, const MaskVolume& b);

/// One line of a per-case comparison between an automatic and a manual mask.
struct CaseRow {
  std::string id;
  double manual_mm3 = 0.0;
  double auto_mm3 = 0.0;
  std::size_t manual_voxels = 0;
  std::size_t auto_voxels = 0;
  double dsc_pct = 0.0;
};

CaseRow case_report(const MaskVolume& pred, const MaskVolume& truth, const std::string& id);

struct Stats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;     // sample (n-1) standard deviation
  bool stddev_defined = false;  // false for n = 1; stddev is then 0
  std::size_t n = 0;
};

Stats describe(std::span<const double> values);

/// Column-wise statistics over a set of case rows; volumes in cm^3.
struct SummaryRow {
  Stats manual_cm3;
  Stats auto_cm3;
  Stats manual_voxels;
  Stats auto_voxels;
  Stats dsc_pct;
};

SummaryRow summarize(std::span<const CaseRow> rows);

/// Plain-text table: one row per case followed by min / max / mean +- sd.
void print_report(std::ostream& out, std::span<const CaseRow> rows, const SummaryRow* summary);

/// {"cases":[{"id","manual_mm3","auto_mm3","manual_voxels","auto_voxels","dsc_pct"}],
///  "summary":{"min","max","mean","stddev"}} with the summary taken over DSC.
std::string report_json(std::span<const CaseRow> rows, const SummaryRow* summary);

}  // namespace raycut
