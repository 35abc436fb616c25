#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scn {

// Skill scores can be undefined when their denominator is zero (no observed
// events / no forecasts); that outcome is first-class, never silently 0.
using Score = std::optional<double>;

struct ContingencyTable {
    int64_t hits = 0;
    int64_t misses = 0;
    int64_t false_alarms = 0;
    int64_t correct_nulls = 0;

    int64_t total() const { return hits + misses + false_alarms + correct_nulls; }

    ContingencyTable& operator+=(const ContingencyTable& o) {
        hits += o.hits;
        misses += o.misses;
        false_alarms += o.false_alarms;
        correct_nulls += o.correct_nulls;
        return *this;
    }
};

// hit: forecast 1, observed 1; miss: forecast 0, observed 1;
// false alarm: forecast 1, observed 0; correct null: both 0.
ContingencyTable contingency(const std::vector<uint8_t>& pred, const std::vector<uint8_t>& truth);

Score pod(const ContingencyTable& t);  // hits / (hits + misses)
Score far(const ContingencyTable& t);  // false alarms / (hits + false alarms)
Score csi(const ContingencyTable& t);  // hits / (hits + misses + false alarms)

struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (FPR, TPR), from (0,0) to (1,1)
    double auc = 0.0;
};

// Descending threshold sweep over distinct scores, trapezoidal AUC. Requires
// at least one positive and one negative label; tied scores advance the
// sweep as a single step.
RocCurve roc(const std::vector<double>& scores, const std::vector<uint8_t>& truth);

struct SkillPoint {
    int64_t time = 0;
    ContingencyTable table;
    Score pod, far, csi;
};

// Per-issue-time scores from tables ordered by time.
std::vector<SkillPoint> skill_series(const std::vector<std::pair<int64_t, ContingencyTable>>& tables);

enum class CellOutcome : uint8_t { Hit = 0, Miss = 1, FalseAlarm = 2, CorrectNull = 3 };

inline char outcome_code(CellOutcome c) {
    switch (c) {
        case CellOutcome::Hit: return 'H';
        case CellOutcome::Miss: return 'M';
        case CellOutcome::FalseAlarm: return 'F';
        case CellOutcome::CorrectNull: return 'N';
    }
    return '?';
}

// Per-cell outcome classes for one issue time on the full cell grid.
struct OverlayGrid {
    int rows = 0, cols = 0;
    std::vector<CellOutcome> cells;  // row-major

    CellOutcome at(int r, int c) const { return cells[static_cast<size_t>(r) * cols + c]; }
    ContingencyTable histogram() const;
};

OverlayGrid overlay(const std::vector<uint8_t>& pred_grid, const std::vector<uint8_t>& truth_grid,
                    int rows, int cols);

}  // namespace scn
