#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "opsplit/montecarlo/estimate.hpp"

namespace opsplit::montecarlo {

/// Header scheme,n,paths,estimate,stderr,reference,error,seed and one row per (report, n).
void write_csv(std::ostream& out, const std::vector<WeakErrorReport>& reports);

/// gnuplot script drawing log-log |error| against n with error bars and the fitted line for each report.
void write_plot_script(std::ostream& out, const std::string& csv_name, const std::string& png_name,
                       const std::vector<WeakErrorReport>& reports);

/// Writes <stem>.csv and <stem>.gp into dir (created if needed); returns the CSV path.
std::filesystem::path write_report_files(const std::filesystem::path& dir, const std::string& stem,
                                         const std::vector<WeakErrorReport>& reports);

/// One line per report: scheme, f, slope +- CI or the indeterminate note.
std::string summarize_fit(const WeakErrorReport& r);

} // namespace opsplit::montecarlo
