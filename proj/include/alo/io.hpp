#ifndef ALO_IO_HPP
#define ALO_IO_HPP

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "alo/operator.hpp"

namespace alo {

using json = nlohmann::json;

namespace detail {

inline std::string line_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline json parse_text(const std::string& text, const std::string& source)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(source + ": " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) +
                          ": invalid JSON (" + e.what() + ")");
    }
}

inline Complex parse_complex(const json& j, const std::string& where)
{
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw FormatError(where + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline BasisSpec parse_basis(const json& j, const std::string& source)
{
    if (!j.is_object()) throw FormatError(source + ": top level must be an object");
    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty())
        throw FormatError(source + ": missing or empty \"dims\" array");
    std::vector<std::size_t> dims;
    for (const auto& d : j["dims"]) {
        if (!d.is_number_integer() || d.get<long long>() < 2)
            throw FormatError(source + ": \"dims\" entries must be integers >= 2");
        dims.push_back(d.get<std::size_t>());
    }
    std::size_t guard = 0;
    if (j.contains("guard")) {
        if (!j["guard"].is_number_integer() || j["guard"].get<long long>() < 0)
            throw FormatError(source + ": \"guard\" must be a non-negative integer");
        guard = j["guard"].get<std::size_t>();
    }
    try {
        return BasisSpec(std::move(dims), guard);
    } catch (const DimensionError& e) {
        throw FormatError(source + ": " + e.what());
    }
}

inline json complex_entry(Complex z) { return json::array({z.real(), z.imag()}); }

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path + ": cannot open file for writing");
    out << text;
    if (!out) throw FormatError(path + ": write failed");
}

} // namespace detail

/// {"dims": [..], "guard": g, "name": s, "matrix": [[[re, im], ...], ...]}, row-major.
inline json operator_to_json(const Operator& x)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < x.dim(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < x.dim(); ++k) row.push_back(detail::complex_entry(x(i, k)));
        rows.push_back(std::move(row));
    }
    return json{{"dims", x.basis().mode_dims()}, {"guard", x.basis().guard()}, {"name", x.name()},
                {"matrix", std::move(rows)}};
}

inline Operator operator_from_json(const json& j, const std::string& source = "<operator>")
{
    const BasisSpec basis = detail::parse_basis(j, source);
    if (!j.contains("matrix") || !j["matrix"].is_array())
        throw FormatError(source + ": missing \"matrix\" array");
    const auto& rows = j["matrix"];
    const auto d = basis.total_dim();
    if (rows.size() != d)
        throw FormatError(source + ": matrix has " + std::to_string(rows.size()) + " rows, dims require " +
                          std::to_string(d));
    Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        if (!rows[i].is_array() || rows[i].size() != d)
            throw FormatError(source + ": matrix row " + std::to_string(i) + " must have " + std::to_string(d) +
                              " entries");
        for (std::size_t k = 0; k < d; ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = detail::parse_complex(
                rows[i][k], source + ": matrix entry (" + std::to_string(i) + "," + std::to_string(k) + ")");
    }
    return Operator(basis, std::move(m), j.value("name", std::string{}));
}

inline json state_to_json(const StateVector& v)
{
    json amps = json::array();
    for (Eigen::Index i = 0; i < v.dim(); ++i) amps.push_back(detail::complex_entry(v.amplitudes()(i)));
    return json{{"dims", v.basis().mode_dims()}, {"guard", v.basis().guard()}, {"name", v.name()},
                {"amplitudes", std::move(amps)}};
}

inline StateVector state_from_json(const json& j, const std::string& source = "<state>")
{
    const BasisSpec basis = detail::parse_basis(j, source);
    if (!j.contains("amplitudes") || !j["amplitudes"].is_array())
        throw FormatError(source + ": missing \"amplitudes\" array");
    const auto& amps = j["amplitudes"];
    if (amps.size() != basis.total_dim())
        throw FormatError(source + ": " + std::to_string(amps.size()) + " amplitudes, dims require " +
                          std::to_string(basis.total_dim()));
    Vector v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i)
        v(static_cast<Eigen::Index>(i)) =
            detail::parse_complex(amps[i], source + ": amplitude " + std::to_string(i));
    return StateVector(basis, std::move(v), j.value("name", std::string{}));
}

inline Operator parse_operator(const std::string& text, const std::string& source = "<operator>")
{
    return operator_from_json(detail::parse_text(text, source), source);
}

inline Operator read_operator(const std::string& path) { return parse_operator(detail::read_file(path), path); }

inline StateVector read_state(const std::string& path)
{
    return state_from_json(detail::parse_text(detail::read_file(path), path), path);
}

inline void write_operator(const Operator& x, const std::string& path)
{
    detail::write_file(path, operator_to_json(x).dump() + "\n");
}

inline void write_state(const StateVector& v, const std::string& path)
{
    detail::write_file(path, state_to_json(v).dump() + "\n");
}

} // namespace alo

#endif
