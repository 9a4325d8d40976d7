#ifndef NETARCH_DATA_HPP
#define NETARCH_DATA_HPP

#include <string>

#include "netarch/core.hpp"

namespace netarch {

enum class CsvLayout { wide, long_ };
enum class CsvField { price, return_ };

/// Reads a return panel from CSV. Wide layout: first column date, one column
/// per ticker. Long layout: columns (date, ticker, value). Header row
/// required, comma separated, '.' decimal point. When field == price the
/// returns are log differences ln(p_t / p_{t-1}) and T shrinks by one.
/// Stocks with missing values on the union calendar are dropped (reported
/// via dropped).
ReturnPanel load_csv(const std::string& path, CsvLayout layout, CsvField field,
                     std::vector<std::string>* dropped = nullptr);

/// Same parser over an in-memory CSV body (used by tests and artifacts).
ReturnPanel parse_csv(const std::string& body, CsvLayout layout, CsvField field,
                      std::vector<std::string>* dropped = nullptr);

/// ln(max(y^2, floor_i)) with the floor chosen by the policy. For
/// floor_min_nonzero the floor is the smallest nonzero y^2 of the stock over
/// this panel (so in a rolling backtest it is computed on the estimation
/// window only). |y| < 1e-300 counts as zero.
LogVolPanel log_squared(const ReturnPanel& panel, ZeroPolicy policy);

/// Per-stock summary rows (ticker, mean, sd, min, max) as CSV text.
std::string summary_csv(const ReturnPanel& panel);

}  // namespace netarch

#endif
