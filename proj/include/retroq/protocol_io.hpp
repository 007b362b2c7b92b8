#pragma once

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "retroq/circuit.hpp"
#include "retroq/constraints.hpp"
#include "retroq/lookup.hpp"
#include "retroq/protocol.hpp"
#include "retroq/state.hpp"

namespace retroq {

/// Line-oriented protocol file:
///   protocol NAME
///   axes M          followed by M lines "x y z"
///   state DIM_A     followed by one line of 2*DIM_A "(re,im)" pairs
///   basis K         followed by K such amplitude lines
///   table K M       followed by K lines of M +/- tokens
///   labels ...      (optional) one line of K labels
/// '#' starts a comment; sections may appear in any order after the header.
struct LoadedProtocol {
    std::string name;
    RetrodictionProtocol protocol;
};

namespace detail {

struct LineReader {
    std::istringstream in;
    int line_no = 0;

    explicit LineReader(const std::string& text) : in(text) {}

    /// Next non-empty line, stripped of comments; false at end of input.
    bool next(std::vector<std::string>& tokens, std::string& where) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            tokens = tokenize(line);
            if (!tokens.empty()) {
                where = "line " + std::to_string(line_no) + ": ";
                return true;
            }
        }
        return false;
    }

    void require(std::vector<std::string>& tokens, std::string& where, const char* what) {
        if (!next(tokens, where))
            throw ParseError("line " + std::to_string(line_no + 1) + ": expected " + what +
                             ", found end of input");
    }
};

inline double parse_real(const std::string& token, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + "malformed number '" + token + "'");
    }
}

inline int parse_count(const std::string& token, const std::string& where) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(token, &used);
        if (used != token.size() || v < 1) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + "malformed count '" + token + "'");
    }
}

inline ComplexScalar parse_amplitude(const std::string& token, const std::string& where) {
    if (token.size() < 5 || token.front() != '(' || token.back() != ')')
        throw ParseError(where + "amplitude must look like '(re,im)', found '" + token + "'");
    const std::string body = token.substr(1, token.size() - 2);
    const std::size_t comma = body.find(',');
    if (comma == std::string::npos)
        throw ParseError(where + "amplitude must look like '(re,im)', found '" + token + "'");
    return {parse_real(body.substr(0, comma), where), parse_real(body.substr(comma + 1), where)};
}

inline StateVector parse_state_line(LineReader& reader, int dim_a) {
    std::vector<std::string> tokens;
    std::string where;
    reader.require(tokens, where, "an amplitude line");
    if (tokens.size() != static_cast<std::size_t>(2 * dim_a))
        throw ParseError(where + "expected " + std::to_string(2 * dim_a) + " amplitudes, found " +
                         std::to_string(tokens.size()));
    StateVector state(dim_a);
    for (std::size_t i = 0; i < tokens.size(); ++i)
        state.amps[i] = parse_amplitude(tokens[i], where);
    return state;
}

inline std::string format_amplitude(const ComplexScalar& z) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", z.real(), z.imag());
    return buf;
}

inline std::string format_state_line(const StateVector& state) {
    std::string out;
    for (std::size_t i = 0; i < state.amps.size(); ++i) {
        if (i) out += ' ';
        out += format_amplitude(state.amps[i]);
    }
    return out;
}

}  // namespace detail

inline LoadedProtocol load_protocol(const std::string& text) {
    detail::LineReader reader(text);
    std::vector<std::string> tokens;
    std::string where;
    reader.require(tokens, where, "'protocol NAME'");
    if (tokens[0] != "protocol" || tokens.size() != 2)
        throw ParseError(where + "file must start with 'protocol NAME'");

    LoadedProtocol loaded;
    loaded.name = tokens[1];
    bool have_axes = false, have_state = false, have_basis = false, have_table = false;
    std::vector<StateVector> basis;
    std::vector<std::string> labels;

    while (reader.next(tokens, where)) {
        if (tokens[0] == "axes" && tokens.size() == 2) {
            const int m = detail::parse_count(tokens[1], where);
            for (int l = 0; l < m; ++l) {
                reader.require(tokens, where, "an axis line");
                if (tokens.size() != 3)
                    throw ParseError(where + "axis line must hold three components");
                const double x = detail::parse_real(tokens[0], where);
                const double y = detail::parse_real(tokens[1], where);
                const double z = detail::parse_real(tokens[2], where);
                try {
                    loaded.protocol.axes.push_back(UnitAxis::normalized(x, y, z));
                } catch (const std::invalid_argument&) {
                    throw ParseError(where + "axis must be a nonzero direction");
                }
            }
            have_axes = true;
        } else if (tokens[0] == "state" && tokens.size() == 2) {
            const int dim_a = detail::parse_count(tokens[1], where);
            loaded.protocol.initial = detail::parse_state_line(reader, dim_a);
            have_state = true;
        } else if (tokens[0] == "basis" && tokens.size() == 2) {
            const int k = detail::parse_count(tokens[1], where);
            reader.require(tokens, where, "an amplitude line");
            // The first basis line fixes dim_a for the remaining ones.
            if (tokens.size() % 2 != 0 || tokens.empty())
                throw ParseError(where + "basis line must hold an even amplitude count");
            const int dim_a = static_cast<int>(tokens.size()) / 2;
            StateVector first(dim_a);
            for (std::size_t i = 0; i < tokens.size(); ++i)
                first.amps[i] = detail::parse_amplitude(tokens[i], where);
            basis.push_back(std::move(first));
            for (int j = 1; j < k; ++j) basis.push_back(detail::parse_state_line(reader, dim_a));
            have_basis = true;
        } else if (tokens[0] == "table" && tokens.size() == 3) {
            const int k = detail::parse_count(tokens[1], where);
            const int m = detail::parse_count(tokens[2], where);
            std::vector<int> signs;
            for (int j = 0; j < k; ++j) {
                reader.require(tokens, where, "a sign row");
                if (tokens.size() != static_cast<std::size_t>(m))
                    throw ParseError(where + "sign row must hold " + std::to_string(m) + " tokens");
                for (const std::string& t : tokens) {
                    if (t == "+")
                        signs.push_back(1);
                    else if (t == "-")
                        signs.push_back(-1);
                    else
                        throw ParseError(where + "sign token must be '+' or '-', found '" + t + "'");
                }
            }
            loaded.protocol.table = LookupTable(k, m, std::move(signs));
            have_table = true;
        } else if (tokens[0] == "labels") {
            labels.assign(tokens.begin() + 1, tokens.end());
        } else {
            throw ParseError(where + "unknown section '" + tokens[0] + "'");
        }
    }
    if (!have_axes) throw ParseError("missing 'axes' section");
    if (!have_state) throw ParseError("missing 'state' section");
    if (!have_basis) throw ParseError("missing 'basis' section");
    if (!have_table) throw ParseError("missing 'table' section");
    try {
        loaded.protocol.measurement = ProjectiveMeasurement(std::move(basis), std::move(labels));
        loaded.protocol.validate_shape();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("inconsistent protocol file: ") + e.what());
    }
    return loaded;
}

inline std::string save_protocol(const std::string& name, const RetrodictionProtocol& protocol) {
    std::string out = "protocol " + name + "\n";
    char buf[120];
    out += "axes " + std::to_string(protocol.axes.size()) + "\n";
    for (const UnitAxis& n : protocol.axes) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", n.x, n.y, n.z);
        out += buf;
    }
    out += "state " + std::to_string(protocol.initial.dim_a) + "\n";
    out += detail::format_state_line(protocol.initial) + "\n";
    out += "basis " + std::to_string(protocol.measurement.basis.size()) + "\n";
    for (const StateVector& phi : protocol.measurement.basis)
        out += detail::format_state_line(phi) + "\n";
    out += "table " + std::to_string(protocol.table.num_outcomes) + " " +
           std::to_string(protocol.table.num_axes) + "\n";
    for (int j = 0; j < protocol.table.num_outcomes; ++j) {
        std::string row;
        for (int l = 0; l < protocol.table.num_axes; ++l) {
            if (l) row += ' ';
            row += protocol.table.sign(j, l) > 0 ? '+' : '-';
        }
        out += row + "\n";
    }
    out += "labels";
    for (const std::string& label : protocol.measurement.labels) out += " " + label;
    out += "\n";
    return out;
}

/// Standalone sign-table file: 'table K M' then K rows of +/- tokens.
inline LookupTable load_table(const std::string& text) {
    detail::LineReader reader(text);
    std::vector<std::string> tokens;
    std::string where;
    reader.require(tokens, where, "'table K M'");
    if (tokens[0] != "table" || tokens.size() != 3)
        throw ParseError(where + "file must start with 'table K M'");
    const int k = detail::parse_count(tokens[1], where);
    const int m = detail::parse_count(tokens[2], where);
    std::vector<int> signs;
    for (int j = 0; j < k; ++j) {
        reader.require(tokens, where, "a sign row");
        if (tokens.size() != static_cast<std::size_t>(m))
            throw ParseError(where + "sign row must hold " + std::to_string(m) + " tokens");
        for (const std::string& t : tokens) {
            if (t == "+")
                signs.push_back(1);
            else if (t == "-")
                signs.push_back(-1);
            else
                throw ParseError(where + "sign token must be '+' or '-', found '" + t + "'");
        }
    }
    return LookupTable(k, m, std::move(signs));
}

/// Standalone gram file: 'gram M' then M rows of M numbers.
inline AxisGram load_gram(const std::string& text) {
    detail::LineReader reader(text);
    std::vector<std::string> tokens;
    std::string where;
    reader.require(tokens, where, "'gram M'");
    if (tokens[0] != "gram" || tokens.size() != 2)
        throw ParseError(where + "file must start with 'gram M'");
    const int m = detail::parse_count(tokens[1], where);
    AxisGram gram(m);
    for (int i = 0; i < m; ++i) {
        reader.require(tokens, where, "a gram row");
        if (tokens.size() != static_cast<std::size_t>(m))
            throw ParseError(where + "gram row must hold " + std::to_string(m) + " numbers");
        for (int j = 0; j < m; ++j) gram.at(i, j) = detail::parse_real(tokens[static_cast<std::size_t>(j)], where);
    }
    return gram;
}

/// Standalone axes file: 'axes M' then M rows "x y z".
inline std::vector<UnitAxis> load_axes(const std::string& text) {
    detail::LineReader reader(text);
    std::vector<std::string> tokens;
    std::string where;
    reader.require(tokens, where, "'axes M'");
    if (tokens[0] != "axes" || tokens.size() != 2)
        throw ParseError(where + "file must start with 'axes M'");
    const int m = detail::parse_count(tokens[1], where);
    std::vector<UnitAxis> axes;
    for (int i = 0; i < m; ++i) {
        reader.require(tokens, where, "an axis line");
        if (tokens.size() != 3)
            throw ParseError(where + "axis line must hold three components");
        const double x = detail::parse_real(tokens[0], where);
        const double y = detail::parse_real(tokens[1], where);
        const double z = detail::parse_real(tokens[2], where);
        try {
            axes.push_back(UnitAxis::normalized(x, y, z));
        } catch (const std::invalid_argument&) {
            throw ParseError(where + "axis must be a nonzero direction");
        }
    }
    return axes;
}

}  // namespace retroq
