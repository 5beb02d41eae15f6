#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fairpost/joint.hpp"

namespace fairpost {

/// Samples read from the standard CSV format
/// `group,score_or_pred,outcome[,weight]` (header required, weight defaults
/// to 1, `#` lines are comments). Group strings map to ids in
/// first-appearance order.
struct SampleTable {
    std::vector<std::string> group_names;
    std::vector<ScoreSample> samples;

    /// True when every score value is exactly 0 or 1.
    bool looks_binary() const;
    std::vector<BinarySample> as_binary() const;
};

SampleTable read_samples_csv(std::istream& in);
SampleTable read_samples_csv_file(const std::string& path);
void write_samples_csv(std::ostream& out, const SampleTable& table);

/// One row of a published marginals table: within-group cumulative population
/// fraction at a score, and the non-default rate at that score.
struct MarginalsRow {
    std::string group;
    double score = 0.0;
    double cumulative_fraction = 0.0;
    double nondefault_rate = 0.0;
    double group_size = 0.0;
};

struct MarginalsTable {
    std::vector<MarginalsRow> rows;

    /// Convert (CDF steps x group sizes x per-score non-default rates) into
    /// weighted (group, score, outcome) mass points.
    SampleTable to_samples() const;
};

/// Header: `group,score,cumulative_fraction,nondefault_rate,group_size`.
MarginalsTable read_marginals_csv(std::istream& in);
MarginalsTable read_marginals_csv_file(const std::string& path);

/// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v);

}  // namespace fairpost
