#include "raycut/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "raycut/error.hpp"
#include "json.hpp"

namespace raycut {

double dice(const MaskVolume& a, const MaskVolume& b) {
  if (!a.geometry().matches(b.geometry())) {
    throw Error(Errc::kGeometryMismatch, "masks do not share the same voxel geometry");
  }
  std::size_t na = 0, nb = 0, both = 0;
  const auto& da = a.data();
  const auto& db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    na += da[i];
    nb += db[i];
    both += da[i] & db[i];
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

CaseRow case_report(const MaskVolume& pred, const MaskVolume& truth, const std::string& id) {
  CaseRow row;
  row.id = id;
  row.dsc_pct = 100.0 * dice(pred, truth);
  const double vox = voxel_volume_mm3(truth.geometry());
  row.manual_voxels = truth.count();
  row.auto_voxels = pred.count();
  row.manual_mm3 = static_cast<double>(row.manual_voxels) * vox;
  row.auto_mm3 = static_cast<double>(row.auto_voxels) * vox;
  return row;
}

Stats describe(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::kEmptyInput, "no values to summarise");
  Stats s;
  s.n = values.size();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
    s.stddev_defined = true;
  }
  return s;
}

SummaryRow summarize(std::span<const CaseRow> rows) {
  if (rows.empty()) throw Error(Errc::kEmptyInput, "no cases to summarise");
  std::vector<double> mv, av, mn, an, dsc;
  for (const auto& r : rows) {
    mv.push_back(r.manual_mm3 / 1000.0);
    av.push_back(r.auto_mm3 / 1000.0);
    mn.push_back(static_cast<double>(r.manual_voxels));
    an.push_back(static_cast<double>(r.auto_voxels));
    dsc.push_back(r.dsc_pct);
  }
  return {describe(mv), describe(av), describe(mn), describe(an), describe(dsc)};
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

void print_report(std::ostream& out, std::span<const CaseRow> rows, const SummaryRow* summary) {
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %14s %14s %14s %14s %9s\n", "case", "manual_mm3",
                "auto_mm3", "manual_voxels", "auto_voxels", "dsc_pct");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-12s %14.1f %14.1f %14zu %14zu %9.2f\n", r.id.c_str(),
                  r.manual_mm3, r.auto_mm3, r.manual_voxels, r.auto_voxels, r.dsc_pct);
    out << line;
  }
  if (!summary) return;
  out << '\n';
  std::snprintf(line, sizeof(line), "%-8s %20s %20s %14s %14s %16s\n", "", "manual_cm3",
                "auto_cm3", "manual_voxels", "auto_voxels", "dsc_pct");
  out << line;
  auto row = [&](const char* name, double (*pick)(const Stats&)) {
    std::snprintf(line, sizeof(line), "%-8s %20.2f %20.2f %14.0f %14.0f %16.2f\n", name,
                  pick(summary->manual_cm3), pick(summary->auto_cm3),
                  pick(summary->manual_voxels), pick(summary->auto_voxels),
                  pick(summary->dsc_pct));
    out << line;
  };
  row("min", [](const Stats& s) { return s.min; });
  row("max", [](const Stats& s) { return s.max; });
  auto pm = [](const Stats& s, const char* spec) {
    return fmt(spec, s.mean) + " ± " + fmt(spec, s.stddev);
  };
  std::snprintf(line, sizeof(line), "%-8s %20s %20s %14.1f %14.1f %16s\n", "mean±sd",
                pm(summary->manual_cm3, "%.2f").c_str(), pm(summary->auto_cm3, "%.2f").c_str(),
                summary->manual_voxels.mean, summary->auto_voxels.mean,
                pm(summary->dsc_pct, "%.2f").c_str());
  out << line;
  if (!summary->dsc_pct.stddev_defined) out << "(single case: standard deviation undefined)\n";
}

std::string report_json(std::span<const CaseRow> rows, const SummaryRow* summary) {
  nlohmann::ordered_json doc;
  doc["cases"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    doc["cases"].push_back({{"id", r.id},
                            {"manual_mm3", r.manual_mm3},
                            {"auto_mm3", r.auto_mm3},
                            {"manual_voxels", r.manual_voxels},
                            {"auto_voxels", r.auto_voxels},
                            {"dsc_pct", r.dsc_pct}});
  }
  if (summary) {
    const Stats& d = summary->dsc_pct;
    doc["summary"] = {{"min", d.min}, {"max", d.max}, {"mean", d.mean}, {"stddev", d.stddev}};
  }
  return doc.dump();
}

}  // namespace raycut
