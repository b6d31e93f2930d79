#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "patchsel/analytic.hpp"
#include "patchsel/errors.hpp"
#include "patchsel/ess.hpp"
#include "patchsel/landscape.hpp"
#include "patchsel/simulate.hpp"

namespace patchsel {

/// Formats a double with 17 significant digits (lossless round trip).
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline std::vector<double> number_array(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array())
        throw ParseError(std::string("missing or non-array field '") + key + "'");
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number())
            throw ParseError(std::string("non-numeric entry in '") + key + "'");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace detail

inline nlohmann::json landscape_to_json(const Landscape& land) {
    nlohmann::json j;
    j["n"] = land.n;
    j["mu"] = land.mu;
    j["kappa"] = land.kappa;
    auto rows = nlohmann::json::array();
    for (int i = 0; i < land.n; ++i) {
        auto row = nlohmann::json::array();
        for (int k = 0; k < land.n; ++k) row.push_back(land.cov(i, k));
        rows.push_back(std::move(row));
    }
    j["sigma"] = std::move(rows);
    return j;
}

inline Landscape landscape_from_json(const nlohmann::json& j) {
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw ParseError("missing or non-integer field 'n'");
    const int n = j["n"].get<int>();
    const auto mu = detail::number_array(j, "mu");
    const auto kappa = detail::number_array(j, "kappa");
    if (!j.contains("sigma") || !j["sigma"].is_array())
        throw ParseError("missing or non-array field 'sigma'");
    std::vector<double> sigma;
    for (const auto& row : j["sigma"]) {
        if (!row.is_array())
            throw ParseError("'sigma' must be an array of arrays");
        for (const auto& v : row) {
            if (!v.is_number())
                throw ParseError("non-numeric entry in 'sigma'");
            sigma.push_back(v.get<double>());
        }
    }
    return build_landscape(n, mu, kappa, sigma);
}

inline Landscape parse_landscape(const std::string& text) {
    try {
        return landscape_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = detail::line_column(text, e.byte);
        throw ParseError("line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + e.what());
    }
}

inline Landscape load_landscape(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileNotFound("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_landscape(buf.str());
}

inline void save_landscape(const Landscape& land, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FileNotFound("cannot write '" + path + "'");
    out << landscape_to_json(land).dump(2) << "\n";
}

/// Parses a comma-separated strategy such as "0.5,0.5".
inline Strategy parse_strategy(const std::string& text) {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParseError("bad strategy component '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return make_strategy(std::move(vals));
}

inline nlohmann::json report_to_json(const InvasionReport& rep) {
    return {{"r_alpha", rep.r_alpha}, {"r_beta", rep.r_beta},
            {"i_ab", rep.i_ab},       {"i_ba", rep.i_ba},
            {"c_ab", rep.c_ab},       {"c_ba", rep.c_ba},
            {"outcome", to_string(rep.outcome)}};
}

inline std::string report_csv_header() {
    return "r_alpha,r_beta,i_ab,i_ba,c_ab,c_ba,outcome";
}

inline std::string report_csv_row(const InvasionReport& rep) {
    std::string row;
    for (double v : {rep.r_alpha, rep.r_beta, rep.i_ab, rep.i_ba, rep.c_ab, rep.c_ba})
        row += format_double(v) + ",";
    row += to_string(rep.outcome);
    return row;
}

inline nlohmann::json certificate_to_json(const EssCertificate& c) {
    return {{"samples", c.samples},
            {"deterministic_points", c.deterministic_points},
            {"tested", c.tested},
            {"violations", c.violations},
            {"worst_invasion_rate", c.worst_invasion_rate},
            {"passed", c.passed}};
}

inline nlohmann::json ess_result_to_json(const EssResult& r) {
    nlohmann::json j;
    j["strategy"] = r.strategy.alpha;
    auto sup = nlohmann::json::array();
    for (int i : r.support) sup.push_back(i + 1);  // 1-based patch numbers
    j["support"] = std::move(sup);
    j["residuals"] = r.residuals;
    j["residual_norm"] = r.residual_norm;
    j["lambda"] = r.lambda;
    j["kind"] = to_string(r.kind);
    j["trace_length"] = r.trace_length;
    if (r.certificate) j["certificate"] = certificate_to_json(*r.certificate);
    return j;
}

inline nlohmann::json stats_to_json(const Trajectory& traj) {
    nlohmann::json comps = nlohmann::json::array();
    for (std::size_t c = 0; c < traj.stats.size(); ++c) {
        const auto& s = traj.stats[c];
        comps.push_back({{"label", traj.labels[c]},
                         {"time_average", s.time_average},
                         {"log_slope", s.log_slope},
                         {"min", s.min},
                         {"max", s.max},
                         {"extinct", s.extinct}});
    }
    return {{"dt", traj.dt}, {"burn_in", traj.burn_in},
            {"t_max", traj.times.empty() ? 0.0 : traj.times.back()},
            {"components", std::move(comps)}};
}

/// Writes `t,<labels...>` rows at 17 significant digits. `header_lines` are
/// emitted first as `# ` comments (provenance: parameters, seed, defaults).
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                                 const std::vector<std::string>& header_lines = {}) {
    for (const auto& h : header_lines) out << "# " << h << "\n";
    out << "t";
    for (const auto& label : traj.labels) out << "," << label;
    out << "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << format_double(traj.times[k]);
        for (const auto& comp : traj.states) out << "," << format_double(comp[k]);
        out << "\n";
    }
}

}  // namespace patchsel
