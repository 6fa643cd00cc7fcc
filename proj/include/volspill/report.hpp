#pragma once

#include "volspill/optim.hpp"
#include "volspill/rolling.hpp"
#include "volspill/spillover.hpp"
#include "volspill/stats.hpp"

#include <string>
#include <vector>

namespace volspill {

/// *** at 1%, ** at 5%, * at 10%, empty otherwise.
std::string significance_stars(double p_value);

/// Numbers are written with 6 significant digits; `full_precision` switches
/// every cell to 17 digits for lossless round-trips.
struct CsvStyle {
    bool full_precision = false;
    std::string cell(double v) const;
};

std::string stats_csv(const StatsReport& report, const CsvStyle& style = {});

/// Generic coefficient table: estimate, standard error, t, two-sided normal
/// p, and the star code per row.
std::string coefficient_table_csv(const std::vector<std::string>& names,
                                  const InferenceResult& inference,
                                  const CsvStyle& style = {});

/// Interior percent matrix with the from-others column, the to-others row
/// carrying the total index in its corner, and the contribution-including-own
/// row.
std::string spillover_table_csv(const SpilloverTable& table, const CsvStyle& style = {});

std::string net_spillover_csv(const SpilloverTable& table, const CsvStyle& style = {});

std::string net_pairwise_csv(const SpilloverTable& table, const CsvStyle& style = {});

/// Long form: date,measure,market_i,market_j,value. Measures: total (no
/// markets), to/from/net (market_i), net_pairwise (both, all ordered pairs).
/// Gap windows serialize as nan.
std::string rolling_series_csv(const RollingSeries& series, const CsvStyle& style = {});

/// Close-only panel CSV (date,<name>,...), full precision so a reload is
/// exact.
std::string close_panel_csv(const PricePanel& panel);

/// Wide ranged CSV (date,<name>_close,<name>_high,<name>_low,...), full
/// precision. Requires high/low.
std::string wide_panel_csv(const PricePanel& panel);

/// Volatility panel CSV (date,<name>,...).
std::string volatility_panel_csv(const VolatilityPanel& panel, const CsvStyle& style = {});

struct ManifestEntry {
    std::string name;  // logical artifact name
    std::string path;  // as written, relative to the output directory
};

/// JSON manifest: artifact list plus the exact configuration key/value set
/// that produced it.
std::string manifest_json(const std::vector<ManifestEntry>& artifacts,
                          const std::vector<std::pair<std::string, std::string>>& config);

}  // namespace volspill
