#pragma once

// JSON and CSV output. Floats are written with 17 significant digits so that
// every double survives a text round trip.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "qwalk/chain_analysis.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/markov_chain.hpp"
#include "qwalk/reflection.hpp"
#include "qwalk/search.hpp"
#include "qwalk/walk_spectrum.hpp"

namespace qwalk {

using Json = nlohmann::json;

inline std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // Keep floats recognisable as floats.
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

namespace detail {

inline void dump_json(std::ostream& os, const Json& j, int indent, int depth) {
    const auto pad = [&](int d) {
        if (indent < 0) return;
        os << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ',';
            first = false;
            pad(depth + 1);
            os << Json(it.key()).dump() << (indent < 0 ? ":" : ": ");
            dump_json(os, it.value(), indent, depth + 1);
        }
        pad(depth);
        os << '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
        os << '[';
        bool first = true;
        for (const auto& e : j) {
            if (!first) os << (flat && indent >= 0 ? ", " : ",");
            first = false;
            if (!flat) pad(depth + 1);
            dump_json(os, e, indent, depth + 1);
        }
        if (!flat) pad(depth);
        os << ']';
        return;
    }
    case Json::value_t::number_float: os << format_double(j.get<double>()); return;
    default: os << j.dump(); return;
    }
}

} // namespace detail

/// Serializes with 17-digit floats; indent < 0 gives a single line.
inline std::string to_json_text(const Json& j, int indent = 2) {
    std::ostringstream os;
    detail::dump_json(os, j, indent, 0);
    return os.str();
}

inline Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const Json& rows) {
    if (!rows.is_array() || rows.empty()) throw InvalidArgument("matrix must be a nonempty array of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto m = static_cast<Eigen::Index>(rows[0].size());
    Matrix out(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m) throw InvalidArgument("ragged matrix rows");
        for (Eigen::Index j = 0; j < m; ++j) out(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
    return out;
}

/// { "states": [labels], "P": [[...]] }
template <typename Label>
Json chain_to_json(const MarkovChain<Label>& chain) {
    Json states = Json::array();
    for (const auto& s : chain.states()) states.push_back(Json(s));
    return Json{{"states", std::move(states)}, {"P", matrix_to_json(chain.transitions())}};
}

/// Labels stay as JSON values; the matrix is validated like any other chain.
inline MarkovChain<Json> chain_from_json(const Json& doc) {
    try {
        std::vector<Json> states(doc.at("states").begin(), doc.at("states").end());
        return MarkovChain<Json>(std::move(states), matrix_from_json(doc.at("P")));
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("malformed chain document: ") + e.what());
    }
}

inline Json to_json(const SpectrumReport& r) {
    Json j;
    j["singular_values"] = std::vector<double>(r.spectrum.singular_values.data(),
                                               r.spectrum.singular_values.data() + r.spectrum.singular_values.size());
    j["thetas"] = std::vector<double>(r.spectrum.thetas.data(), r.spectrum.thetas.data() + r.spectrum.thetas.size());
    j["predicted_phases"] = r.predicted_phases;
    j["measured_phases"] = r.measured_phases ? Json(*r.measured_phases) : Json(nullptr);
    j["max_phase_error"] = r.measured_phases ? Json(r.max_phase_error) : Json(nullptr);
    j["unit_eigenspace_dimension"] = r.measured_phases ? Json(r.unit_eigenspace_dimension) : Json(nullptr);
    j["pi_fidelity"] = r.measured_phases ? Json(r.pi_fidelity) : Json(nullptr);
    j["phase_gap"] = r.phase_gap;
    j["delta"] = r.delta;
    j["one_sided_gap"] = r.one_sided_gap;
    j["two_sqrt_delta"] = 2.0 * std::sqrt(r.delta);
    j["gap_margin"] = r.gap_margin;
    j["reversible"] = r.reversible;
    return j;
}

inline Json to_json(const ReflectionReport& r) {
    return Json{{"s", r.precision},
                {"k", r.banks},
                {"controlled_walk_calls", r.controlled_walk_calls},
                {"measured_error", r.measured_error},
                {"fixed_point_error", r.fixed_point_error},
                {"ancilla_restored", r.ancilla_restored},
                {"vectors_tested", r.vectors_tested}};
}

inline Json to_json(const CostCounter& c) {
    return Json{{"setup_units", c.setup_units},
                {"update_units", c.update_units},
                {"check_units", c.check_units},
                {"overhead_units", c.overhead_units},
                {"total", c.total()},
                {"setups", c.setups},
                {"updates", c.updates},
                {"checks", c.checks},
                {"walk_calls", c.walk_calls}};
}

/// { "found", "success", "counters", "trace": [[i, marked_mass], ...] }
template <typename Label>
Json to_json(const SearchOutcome<Label>& o) {
    Json trace = Json::array();
    for (const auto& [i, m] : o.trace) trace.push_back(Json::array({i, m}));
    return Json{{"found", o.found ? Json(*o.found) : Json(nullptr)},
                {"success", o.success},
                {"counters", to_json(o.counters)},
                {"trace", std::move(trace)}};
}

/// Joins CSV fields; doubles use the same 17-digit format.
class CsvRow {
public:
    CsvRow& operator<<(const std::string& s) { return add(s); }
    CsvRow& operator<<(const char* s) { return add(s); }
    CsvRow& operator<<(double v) { return add(format_double(v)); }
    template <typename Int>
        requires std::is_integral_v<Int>
    CsvRow& operator<<(Int v) { return add(std::to_string(v)); }
    std::string str() const { return line_; }

private:
    CsvRow& add(const std::string& s) {
        if (!first_) line_ += ',';
        first_ = false;
        line_ += s;
        return *this;
    }
    std::string line_;
    bool first_ = true;
};

} // namespace qwalk
