#include "netarch/data.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace netarch {

namespace {

constexpr double kZeroMagnitude = 1e-300;  // below this a return counts as zero

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, int row, int col) {
    size_t pos = 0;
    double v;
    try {
        v = std::stod(cell, &pos);
    } catch (const std::exception&) {
        throw Error(errc::parse_error, "row " + std::to_string(row) + ", column " +
                                           std::to_string(col) + ": not a number: '" + cell + "'");
    }
    if (pos != cell.size())
        throw Error(errc::parse_error, "row " + std::to_string(row) + ", column " +
                                           std::to_string(col) + ": trailing junk in '" + cell + "'");
    return v;
}

using RawMap = std::map<std::string, std::map<std::string, double>>;

void insert_value(RawMap& raw, const std::string& ticker, const std::string& date, double v) {
    auto [it, inserted] = raw[ticker].emplace(date, v);
    if (!inserted)
        throw Error(errc::duplicate_key, "repeated (date,ticker) = (" + date + "," + ticker + ")");
}

ReturnPanel prices_to_returns(const ReturnPanel& prices) {
    if (prices.T() < 2) throw Error(errc::invalid_value, "need >= 2 dates to difference prices");
    ReturnPanel out;
    out.tickers = prices.tickers;
    out.dates.assign(prices.dates.begin() + 1, prices.dates.end());
    out.returns.resize(prices.n(), prices.T() - 1);
    for (int i = 0; i < prices.n(); ++i)
        for (int t = 1; t < prices.T(); ++t) {
            const double p0 = prices.returns(i, t - 1), p1 = prices.returns(i, t);
            if (!(p0 > 0.0) || !(p1 > 0.0))
                throw Error(errc::invalid_value,
                            "nonpositive price for " + prices.tickers[i] + " at " + prices.dates[t]);
            out.returns(i, t - 1) = std::log(p1 / p0);
        }
    out.check();
    return out;
}

}  // namespace

ReturnPanel parse_csv(const std::string& body, CsvLayout layout, CsvField field,
                      std::vector<std::string>* dropped) {
    std::stringstream in(body);
    std::string line;
    if (!std::getline(in, line)) throw Error(errc::parse_error, "empty file");
    const auto header = split_row(line);
    if (header.size() < 2) throw Error(errc::parse_error, "header needs at least 2 columns");

    RawMap raw;
    int row = 1;
    if (layout == CsvLayout::wide) {
        const int ncols = static_cast<int>(header.size());
        while (std::getline(in, line)) {
            ++row;
            if (line.empty() || line == "\r") continue;
            const auto cells = split_row(line);
            if (static_cast<int>(cells.size()) != ncols)
                throw Error(errc::parse_error,
                            "row " + std::to_string(row) + ": expected " + std::to_string(ncols) +
                                " cells, got " + std::to_string(cells.size()));
            for (int c = 1; c < ncols; ++c) {
                if (cells[c].empty()) continue;  // missing value; stock dropped later
                insert_value(raw, header[c], cells[0], parse_cell(cells[c], row, c + 1));
            }
        }
    } else {
        if (header.size() != 3)
            throw Error(errc::parse_error, "long layout needs exactly (date,ticker,value) columns");
        while (std::getline(in, line)) {
            ++row;
            if (line.empty() || line == "\r") continue;
            const auto cells = split_row(line);
            if (cells.size() != 3)
                throw Error(errc::parse_error, "row " + std::to_string(row) + ": expected 3 cells");
            insert_value(raw, cells[1], cells[0], parse_cell(cells[2], row, 3));
        }
    }

    ReturnPanel panel = validate_panel(raw, dropped);
    if (field == CsvField::price) panel = prices_to_returns(panel);
    return panel;
}

ReturnPanel load_csv(const std::string& path, CsvLayout layout, CsvField field,
                     std::vector<std::string>* dropped) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::parse_error, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), layout, field, dropped);
}

LogVolPanel log_squared(const ReturnPanel& panel, ZeroPolicy policy) {
    panel.check();
    if (policy.mode == ZeroPolicy::Mode::floor_constant && !(policy.floor_c > 0.0))
        throw Error(errc::invalid_value, "floor constant must be > 0");
    policy.floors.clear();
    policy.applied_counts.clear();

    LogVolPanel out;
    out.tickers = panel.tickers;
    out.dates = panel.dates;
    out.values.resize(panel.n(), panel.T());

    for (int i = 0; i < panel.n(); ++i) {
        double floor_i = policy.floor_c;
        if (policy.mode == ZeroPolicy::Mode::floor_min_nonzero) {
            floor_i = std::numeric_limits<double>::infinity();
            for (int t = 0; t < panel.T(); ++t) {
                const double y = panel.returns(i, t);
                if (std::abs(y) >= kZeroMagnitude) floor_i = std::min(floor_i, y * y);
            }
            if (!std::isfinite(floor_i))
                throw Error(errc::all_zero_series, panel.tickers[i] + " has no nonzero return");
        }
        int floored = 0;
        for (int t = 0; t < panel.T(); ++t) {
            const double y = panel.returns(i, t);
            const double y2 = std::abs(y) < kZeroMagnitude ? 0.0 : y * y;
            if (y2 <= floor_i) {
                out.values(i, t) = std::log(floor_i);
                if (y2 < floor_i) ++floored;
            } else {
                out.values(i, t) = std::log(y2);
            }
        }
        policy.floors[panel.tickers[i]] = floor_i;
        policy.applied_counts[panel.tickers[i]] = floored;
    }
    out.zero_policy = std::move(policy);
    out.check();
    return out;
}

std::string summary_csv(const ReturnPanel& panel) {
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << "ticker,mean,sd,min,max\n";
    for (int i = 0; i < panel.n(); ++i) {
        const auto row = panel.returns.row(i);
        const double mean = row.mean();
        const double sd = std::sqrt((row.array() - mean).square().sum() / (panel.T() - 1));
        os << panel.tickers[i] << ',' << mean << ',' << sd << ',' << row.minCoeff() << ','
           << row.maxCoeff() << '\n';
    }
    return os.str();
}

}  // namespace netarch
