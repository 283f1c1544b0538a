#include "opsplit/montecarlo/report_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "opsplit/common/errors.hpp"

namespace opsplit::montecarlo {

void write_csv(std::ostream& out, const std::vector<WeakErrorReport>& reports)
{
    out << "scheme,n,paths,estimate,stderr,reference,error,seed\n";
    out << std::setprecision(17);
    for (const auto& r : reports)
        for (const auto& row : r.rows)
            out << r.scheme << "," << row.n << "," << row.paths << "," << row.estimate << "," << row.stderr_ << ","
                << row.reference << "," << row.error << "," << r.seed << "\n";
}

void write_plot_script(std::ostream& out, const std::string& csv_name, const std::string& png_name,
                       const std::vector<WeakErrorReport>& reports)
{
    out << "# gnuplot " << csv_name << "\n"
        << "set datafile separator ','\n"
        << "set terminal pngcairo size 900,650\n"
        << "set output '" << png_name << "'\n"
        << "set logscale xy\n"
        << "set xlabel 'n'\n"
        << "set ylabel '|weak error|'\n"
        << "set key left bottom\n";
    std::ostringstream plot;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        const std::size_t first = offset, last = offset + r.rows.size() - 1;
        offset += r.rows.size();
        plot << (i ? ", \\\n     " : "plot ") << "'" << csv_name << "' every ::" << first + 1 << "::" << last + 1
             << " using 2:(abs($7)):5 with yerrorbars title '" << r.scheme << " " << r.function << "'";
        if (r.fit.status == FitResult::Status::ok)
            plot << ", \\\n     exp(" << std::setprecision(10) << r.fit.intercept << ") * x**(" << -r.fit.slope
                 << ") title sprintf('slope %.3f', " << r.fit.slope << ")";
    }
    out << plot.str() << "\n";
}

std::filesystem::path write_report_files(const std::filesystem::path& dir, const std::string& stem,
                                         const std::vector<WeakErrorReport>& reports)
{
    std::filesystem::create_directories(dir);
    const auto csv = dir / (stem + ".csv");
    const auto gp = dir / (stem + ".gp");
    std::ofstream c(csv), g(gp);
    if (!c || !g)
        throw ConfigError("cannot write report files in " + dir.string());
    write_csv(c, reports);
    write_plot_script(g, csv.filename().string(), stem + ".png", reports);
    return csv;
}

std::string summarize_fit(const WeakErrorReport& r)
{
    std::ostringstream s;
    s << r.scheme << " f=" << r.function << " reference=" << std::setprecision(12) << r.reference.value << " ("
      << to_string(r.reference.provenance) << ")";
    if (r.fit.status == FitResult::Status::ok)
        s << std::setprecision(4) << " order " << r.fit.slope << " +- " << r.fit.ci_half_width << " ("
          << r.fit.points_used << " points)";
    else
        s << " order indeterminate: " << r.fit.note;
    return s.str();
}

} // namespace opsplit::montecarlo
