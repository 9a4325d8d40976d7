#include "netarch/json_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace netarch {

namespace {

Json matrix_to_json(const Matrix& m) {
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    std::vector<double> data;
    data.reserve(m.size());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    j["data"] = std::move(data);
    return j;
}

Matrix matrix_from_json(const Json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw Error(errc::parse_error, "matrix data length mismatch");
    Matrix m(rows, cols);
    size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++];
    return m;
}

Json vector_to_json(const Vector& v) {
    return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from_json(const Json& j) {
    const auto data = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(data.data(), static_cast<Eigen::Index>(data.size()));
}

}  // namespace

Json to_json(const ReturnPanel& p) {
    return Json{{"tickers", p.tickers}, {"dates", p.dates}, {"returns", matrix_to_json(p.returns)}};
}

ReturnPanel panel_from_json(const Json& j) {
    ReturnPanel p;
    p.tickers = j.at("tickers").get<std::vector<std::string>>();
    p.dates = j.at("dates").get<std::vector<std::string>>();
    p.returns = matrix_from_json(j.at("returns"));
    p.check();
    return p;
}

Json to_json(const ZeroPolicy& z) {
    return Json{{"mode", z.mode == ZeroPolicy::Mode::floor_min_nonzero ? "floor_min_nonzero"
                                                                       : "floor_constant"},
                {"floor_c", z.floor_c},
                {"floors", z.floors},
                {"applied_counts", z.applied_counts}};
}

ZeroPolicy zero_policy_from_json(const Json& j) {
    ZeroPolicy z;
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "floor_min_nonzero")
        z.mode = ZeroPolicy::Mode::floor_min_nonzero;
    else if (mode == "floor_constant")
        z.mode = ZeroPolicy::Mode::floor_constant;
    else
        throw Error(errc::parse_error, "unknown zero policy mode: " + mode);
    z.floor_c = j.at("floor_c").get<double>();
    z.floors = j.at("floors").get<std::map<std::string, double>>();
    z.applied_counts = j.at("applied_counts").get<std::map<std::string, int>>();
    return z;
}

Json to_json(const LogVolPanel& p) {
    return Json{{"tickers", p.tickers},
                {"dates", p.dates},
                {"values", matrix_to_json(p.values)},
                {"zero_policy", to_json(p.zero_policy)}};
}

LogVolPanel logvol_from_json(const Json& j) {
    LogVolPanel p;
    p.tickers = j.at("tickers").get<std::vector<std::string>>();
    p.dates = j.at("dates").get<std::vector<std::string>>();
    p.values = matrix_from_json(j.at("values"));
    p.zero_policy = zero_policy_from_json(j.at("zero_policy"));
    p.check();
    return p;
}

Json to_json(const EdgeWeightMatrix& w) {
    return Json{{"weights", matrix_to_json(w.weights)},
                {"kind", w.kind == EdgeWeightMatrix::Kind::knn ? "knn" : "inverse_distance"},
                {"normalization", w.normalization == EdgeWeightMatrix::Norm::row_normalized
                                      ? "row_normalized"
                                      : "raw"},
                {"k", w.k}};
}

EdgeWeightMatrix edge_weights_from_json(const Json& j) {
    EdgeWeightMatrix w;
    w.weights = matrix_from_json(j.at("weights"));
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "knn")
        w.kind = EdgeWeightMatrix::Kind::knn;
    else if (kind == "inverse_distance")
        w.kind = EdgeWeightMatrix::Kind::inverse_distance;
    else
        throw Error(errc::parse_error, "unknown weight kind: " + kind);
    const auto norm = j.at("normalization").get<std::string>();
    if (norm == "row_normalized")
        w.normalization = EdgeWeightMatrix::Norm::row_normalized;
    else if (norm == "raw")
        w.normalization = EdgeWeightMatrix::Norm::raw;
    else
        throw Error(errc::parse_error, "unknown normalization: " + norm);
    w.k = j.at("k").get<int>();
    w.check();  // invariants re-checked on deserialization
    return w;
}

Json to_json(const DistanceMatrix& d) {
    const char* kind = d.kind == DistanceKind::euclidean     ? "euclidean"
                       : d.kind == DistanceKind::correlation ? "correlation"
                                                             : "logarch_ar";
    return Json{{"tickers", d.tickers},
                {"d", matrix_to_json(d.d)},
                {"kind", kind},
                {"ar_orders", d.ar_orders}};
}

DistanceMatrix distance_from_json(const Json& j) {
    DistanceMatrix d;
    d.tickers = j.at("tickers").get<std::vector<std::string>>();
    d.d = matrix_from_json(j.at("d"));
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "euclidean")
        d.kind = DistanceKind::euclidean;
    else if (kind == "correlation")
        d.kind = DistanceKind::correlation;
    else if (kind == "logarch_ar")
        d.kind = DistanceKind::logarch_ar;
    else
        throw Error(errc::parse_error, "unknown distance kind: " + kind);
    d.ar_orders = j.at("ar_orders").get<std::map<std::string, int>>();
    d.check();
    return d;
}

Json to_json(const UnivariateFit& f) {
    return Json{{"phi0", f.phi0},        {"gamma", vector_to_json(f.gamma)},
                {"mu_star", f.mu_star},  {"omega", f.omega},
                {"order", f.order},      {"residuals", vector_to_json(f.residuals)},
                {"se", vector_to_json(f.se)}};
}

UnivariateFit univariate_fit_from_json(const Json& j) {
    UnivariateFit f;
    f.phi0 = j.at("phi0").get<double>();
    f.gamma = vector_from_json(j.at("gamma"));
    f.mu_star = j.at("mu_star").get<double>();
    f.omega = j.at("omega").get<double>();
    f.order = j.at("order").get<int>();
    f.residuals = vector_from_json(j.at("residuals"));
    f.se = vector_from_json(j.at("se"));
    return f;
}

Json to_json(const NetworkFit& f) {
    return Json{{"rho", f.rho},
                {"gamma_diag", vector_to_json(f.gamma_diag)},
                {"phi0", vector_to_json(f.phi0)},
                {"mu_star", vector_to_json(f.mu_star)},
                {"residual_panel", matrix_to_json(f.residual_panel)},
                {"w_ref", f.w_ref},
                {"se_rho", f.se_rho},
                {"instrument_depth", f.instrument_depth},
                {"gmm_objective", f.gmm_objective}};
}

NetworkFit network_fit_from_json(const Json& j) {
    NetworkFit f;
    f.rho = j.at("rho").get<double>();
    f.gamma_diag = vector_from_json(j.at("gamma_diag"));
    f.phi0 = vector_from_json(j.at("phi0"));
    f.mu_star = vector_from_json(j.at("mu_star"));
    f.residual_panel = matrix_from_json(j.at("residual_panel"));
    f.w_ref = j.at("w_ref").get<std::string>();
    f.se_rho = j.at("se_rho").get<double>();
    f.instrument_depth = j.at("instrument_depth").get<int>();
    f.gmm_objective = j.at("gmm_objective").get<double>();
    return f;
}

Json to_json(const ForecastTable& t) {
    Json j;
    j["model_ids"] = t.model_ids;
    j["tickers"] = t.tickers;
    j["dates"] = t.dates;
    j["realized"] = matrix_to_json(t.realized);
    Json fc = Json::object();
    for (int m = 0; m < t.n_models(); ++m) fc[t.model_ids[m]] = matrix_to_json(t.forecasts[m]);
    j["forecasts"] = std::move(fc);
    return j;
}

ForecastTable forecast_table_from_json(const Json& j) {
    ForecastTable t;
    t.model_ids = j.at("model_ids").get<std::vector<std::string>>();
    t.tickers = j.at("tickers").get<std::vector<std::string>>();
    t.dates = j.at("dates").get<std::vector<std::string>>();
    t.realized = matrix_from_json(j.at("realized"));
    for (const auto& id : t.model_ids)
        t.forecasts.push_back(matrix_from_json(j.at("forecasts").at(id)));
    t.check();
    return t;
}

std::string dump_canonical(const Json& j) { return j.dump(); }

std::string wrap_artifact(const std::string& type, const Json& payload) {
    const std::string body = dump_canonical(payload);
    Json j{{"type", type}, {"hash", content_hash(body)}, {"payload", payload}};
    return dump_canonical(j);
}

Json read_artifact(const std::string& text, const std::string& expected_type) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        throw Error(errc::parse_error, std::string("bad artifact JSON: ") + e.what());
    }
    if (!j.contains("type") || j.at("type").get<std::string>() != expected_type)
        throw Error(errc::parse_error, "artifact is not a " + expected_type);
    return j.at("payload");
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::parse_error, "cannot write " + path);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::parse_error, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace netarch
