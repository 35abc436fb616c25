#include "scn/verify.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace scn {

ContingencyTable contingency(const std::vector<uint8_t>& pred, const std::vector<uint8_t>& truth) {
    if (pred.size() != truth.size())
        throw std::invalid_argument("contingency: length mismatch");
    ContingencyTable t;
    for (size_t i = 0; i < pred.size(); ++i) {
        const bool p = pred[i] != 0, o = truth[i] != 0;
        if (p && o)
            ++t.hits;
        else if (!p && o)
            ++t.misses;
        else if (p && !o)
            ++t.false_alarms;
        else
            ++t.correct_nulls;
    }
    return t;
}

Score pod(const ContingencyTable& t) {
    const int64_t denom = t.hits + t.misses;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(t.hits) / static_cast<double>(denom);
}

Score far(const ContingencyTable& t) {
    const int64_t denom = t.hits + t.false_alarms;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(t.false_alarms) / static_cast<double>(denom);
}

Score csi(const ContingencyTable& t) {
    const int64_t denom = t.hits + t.misses + t.false_alarms;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(t.hits) / static_cast<double>(denom);
}

RocCurve roc(const std::vector<double>& scores, const std::vector<uint8_t>& truth) {
    if (scores.size() != truth.size()) throw std::invalid_argument("roc: length mismatch");
    int64_t npos = 0, nneg = 0;
    for (uint8_t y : truth) (y ? npos : nneg) += 1;
    if (npos == 0 || nneg == 0)
        throw std::invalid_argument("roc: needs at least one positive and one negative");

    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;  // stable under ties
    });

    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    int64_t tp = 0, fp = 0;
    double prev_fpr = 0.0, prev_tpr = 0.0;
    size_t i = 0;
    while (i < order.size()) {
        // Consume the whole tie group before emitting a point.
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            (truth[order[i]] ? tp : fp) += 1;
            ++i;
        }
        const double fpr = static_cast<double>(fp) / static_cast<double>(nneg);
        const double tpr = static_cast<double>(tp) / static_cast<double>(npos);
        curve.auc += 0.5 * (fpr - prev_fpr) * (tpr + prev_tpr);
        curve.points.emplace_back(fpr, tpr);
        prev_fpr = fpr;
        prev_tpr = tpr;
    }
    return curve;
}

std::vector<SkillPoint> skill_series(
    const std::vector<std::pair<int64_t, ContingencyTable>>& tables) {
    std::vector<SkillPoint> out;
    out.reserve(tables.size());
    for (const auto& [time, table] : tables) {
        SkillPoint p;
        p.time = time;
        p.table = table;
        p.pod = pod(table);
        p.far = far(table);
        p.csi = csi(table);
        out.push_back(p);
    }
    return out;
}

ContingencyTable OverlayGrid::histogram() const {
    ContingencyTable t;
    for (CellOutcome c : cells) {
        switch (c) {
            case CellOutcome::Hit: ++t.hits; break;
            case CellOutcome::Miss: ++t.misses; break;
            case CellOutcome::FalseAlarm: ++t.false_alarms; break;
            case CellOutcome::CorrectNull: ++t.correct_nulls; break;
        }
    }
    return t;
}

OverlayGrid overlay(const std::vector<uint8_t>& pred_grid, const std::vector<uint8_t>& truth_grid,
                    int rows, int cols) {
    const size_t n = static_cast<size_t>(rows) * cols;
    if (pred_grid.size() != n || truth_grid.size() != n)
        throw std::invalid_argument("overlay: grid dims mismatch");
    OverlayGrid g;
    g.rows = rows;
    g.cols = cols;
    g.cells.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const bool p = pred_grid[i] != 0, o = truth_grid[i] != 0;
        g.cells[i] = p && o    ? CellOutcome::Hit
                     : !p && o ? CellOutcome::Miss
                     : p       ? CellOutcome::FalseAlarm
                               : CellOutcome::CorrectNull;
    }
    return g;
}

}  // namespace scn
