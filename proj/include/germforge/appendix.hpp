#pragma once

#include "germforge/blowup.hpp"

#include <string>
#include <vector>

namespace germforge {

/// One comparison between a second-order coefficient computed by the series pipeline
/// and its published closed form.
struct AppendixRow {
    std::string symbol;
    double theta = 0;
    double series_value = 0;
    double closed_value = 0;
    double delta = 0;
    /// |delta| above 1e-8 (1 + |series_value|)
    bool mismatch = false;
    /// The symbol belongs to the fixed list of displays known to disagree with the pipeline.
    bool suspected_typo = false;
};

/// Symbols compared, in report order.
const std::vector<std::string>& appendix_symbols();
/// Displays whose printed form disagrees with the pipeline for generic germs.
const std::vector<std::string>& appendix_suspected_typos();

/// Closed form of one symbol at theta; NaN where it is undefined (cos theta = 0 for the
/// curvature and lift coefficients).
double appendix_closed_form(const BlowupContext& ctx, const std::string& symbol, double theta);
/// Pipeline value of one symbol at theta; NaN where undefined.
double appendix_series_value(const BlowupContext& ctx, const std::string& symbol, double theta);

/// Every symbol at every theta; rows with an undefined value on either side are skipped.
std::vector<AppendixRow> appendix_crosscheck(const BlowupContext& ctx, const std::vector<double>& thetas);
Json appendix_json(const std::vector<AppendixRow>& rows);

}  // namespace germforge
