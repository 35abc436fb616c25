#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scn/train.hpp"
#include "scn/verify.hpp"

namespace scn {

// CSV/PGM artifact writers. Scores that are undefined (zero denominator) are
// written as "nan", never as 0.

std::string format_score(const Score& s);

struct EventScore {
    std::string event;
    ContingencyTable table;
    Score pod, far, csi;
    std::optional<double> auc;
};

// Columns: event,hits,misses,false_alarms,correct_nulls,pod,far,csi,auc
void write_scores_csv(const std::filesystem::path& path, const std::vector<EventScore>& rows);

// Columns: iteration,loss,csi,pod,far
void write_history_csv(const std::filesystem::path& path, const TrainHistory& history);

// Columns: fpr,tpr (one row per sweep point); AUC on a trailing comment line.
void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve);

// Columns: time,hits,misses,false_alarms,correct_nulls,pod,far,csi
void write_series_csv(const std::filesystem::path& path, const std::vector<SkillPoint>& series);

// Cell classes as rows of comma-separated {H,M,F,N} codes.
void write_overlay_csv(const std::filesystem::path& path, const OverlayGrid& grid);

// 4-gray-level PGM (H=0, M=85, F=170, N=255) for quick visual inspection.
void write_overlay_pgm(const std::filesystem::path& path, const OverlayGrid& grid);

// Removes every tracked file unless commit() was called; keeps failed
// commands from leaving partial outputs behind.
class OutputTracker {
public:
    ~OutputTracker();
    std::filesystem::path track(std::filesystem::path p);
    void commit() { committed_ = true; }

private:
    std::vector<std::filesystem::path> files_;
    bool committed_ = false;
};

}  // namespace scn
