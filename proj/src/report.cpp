#include "scn/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace scn {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(9) << v;
    return os.str();
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open output file " + path.string());
    return os;
}

}  // namespace

std::string format_score(const Score& s) { return s ? fmt(*s) : "nan"; }

void write_scores_csv(const fs::path& path, const std::vector<EventScore>& rows) {
    std::ofstream os = open_out(path);
    os << "event,hits,misses,false_alarms,correct_nulls,pod,far,csi,auc\n";
    for (const EventScore& r : rows) {
        os << r.event << ',' << r.table.hits << ',' << r.table.misses << ','
           << r.table.false_alarms << ',' << r.table.correct_nulls << ',' << format_score(r.pod)
           << ',' << format_score(r.far) << ',' << format_score(r.csi) << ','
           << (r.auc ? fmt(*r.auc) : "nan") << '\n';
    }
    if (!os) throw std::runtime_error("I/O failure writing " + path.string());
}

void write_history_csv(const fs::path& path, const TrainHistory& history) {
    std::ofstream os = open_out(path);
    os << "iteration,loss,csi,pod,far\n";
    for (const TrainRecord& r : history.records)
        os << r.iteration << ',' << fmt(r.loss) << ',' << format_score(r.csi) << ','
           << format_score(r.pod) << ',' << format_score(r.far) << '\n';
    if (!os) throw std::runtime_error("I/O failure writing " + path.string());
}

void write_roc_csv(const fs::path& path, const RocCurve& curve) {
    std::ofstream os = open_out(path);
    os << "fpr,tpr\n";
    for (const auto& [fpr, tpr] : curve.points) os << fmt(fpr) << ',' << fmt(tpr) << '\n';
    os << "# auc=" << fmt(curve.auc) << '\n';
    if (!os) throw std::runtime_error("I/O failure writing " + path.string());
}

void write_series_csv(const fs::path& path, const std::vector<SkillPoint>& series) {
    std::ofstream os = open_out(path);
    os << "time,hits,misses,false_alarms,correct_nulls,pod,far,csi\n";
    for (const SkillPoint& p : series)
        os << p.time << ',' << p.table.hits << ',' << p.table.misses << ','
           << p.table.false_alarms << ',' << p.table.correct_nulls << ',' << format_score(p.pod)
           << ',' << format_score(p.far) << ',' << format_score(p.csi) << '\n';
    if (!os) throw std::runtime_error("I/O failure writing " + path.string());
}

void write_overlay_csv(const fs::path& path, const OverlayGrid& grid) {
    std::ofstream os = open_out(path);
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            if (c) os << ',';
            os << outcome_code(grid.at(r, c));
        }
        os << '\n';
    }
    if (!os) throw std::runtime_error("I/O failure writing " + path.string());
}

void write_overlay_pgm(const fs::path& path, const OverlayGrid& grid) {
    std::ofstream os = open_out(path);
    os << "P2\n" << grid.cols << ' ' << grid.rows << "\n255\n";
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            if (c) os << ' ';
            os << 85 * static_cast<int>(grid.at(r, c));
        }
        os << '\n';
    }
    if (!os) throw std::runtime_error("I/O failure writing " + path.string());
}

OutputTracker::~OutputTracker() {
    if (committed_) return;
    for (const fs::path& p : files_) {
        std::error_code ec;
        fs::remove_all(p, ec);
    }
}

fs::path OutputTracker::track(fs::path p) {
    files_.push_back(p);
    return p;
}

}  // namespace scn
