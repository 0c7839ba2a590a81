#pragma once

// =============================================================================
// File formats and CLI literals
// =============================================================================
// Network files are JSON objects {"n": int, "weights": [[...], ...],
// "input": null | [...]}; a non-null input is embedded as a clamped unit.
// Reports, verdicts and trajectories serialize to JSON; curves and field
// grids to CSV. Set literals on the command line are comma-separated
// 1-based indices ("1,3"), families are semicolon-separated sets with a
// kind prefix ("nested:1;1,2").
// =============================================================================

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "glassnet/core.hpp"
#include "glassnet/coupling.hpp"
#include "glassnet/dynamics.hpp"
#include "glassnet/factorization.hpp"
#include "glassnet/network.hpp"
#include "glassnet/signs.hpp"
#include "glassnet/stability.hpp"

namespace glassnet {

using json = nlohmann::json;

struct ParseError : Error {
    using Error::Error;
};

namespace detail {

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

}  // namespace detail

inline json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(origin + ": parse error at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + e.what());
    }
}

/// Loads a network file; a non-null "input" array is embedded as a clamped
/// feedforward unit.
inline GlassNetwork load_network_text(const std::string& text, const std::string& origin,
                                      bool allow_violations = false) {
    const json j = parse_json_text(text, origin);
    if (!j.is_object() || !j.contains("n") || !j.contains("weights"))
        throw ParseError(origin + ": expected an object with \"n\" and \"weights\"");
    const int n = j.at("n").get<int>();
    if (n < 1) throw ParseError(origin + ": \"n\" must be a positive integer");
    const auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(rows.size()) != n)
        throw ParseError(origin + ": \"weights\" must have n rows");
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != n)
            throw ParseError(origin + ": \"weights\" rows must have n entries");
    WeightMatrix w = WeightMatrix::from_rows(rows);
    if (j.contains("input") && !j.at("input").is_null()) {
        const Vec mu = j.at("input").get<Vec>();
        if (static_cast<int>(mu.size()) != n)
            throw ParseError(origin + ": \"input\" must have n entries");
        return embed_input(w, mu, allow_violations);
    }
    return GlassNetwork::vanishing(std::move(w), allow_violations);
}

inline GlassNetwork load_network_file(const std::string& path, bool allow_violations = false) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open network file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_network_text(buf.str(), path, allow_violations);
}

inline json network_to_json(const GlassNetwork& net) {
    json j;
    if (net.is_embedded()) {
        const int n = net.n() - 1;
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(n));
        Vec mu(static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i) {
            for (int jcol = 1; jcol <= n; ++jcol)
                rows[static_cast<std::size_t>(i - 1)].push_back(net.weights()(i, jcol));
            mu[static_cast<std::size_t>(i - 1)] = net.weights()(i, n + 1);
        }
        j["n"] = n;
        j["weights"] = rows;
        j["input"] = mu;
    } else {
        j["n"] = net.n();
        j["weights"] = net.weights().matrix().to_rows();
        j["input"] = nullptr;
    }
    return j;
}

// ---------------------------------------------------------------------------
// CLI literals
// ---------------------------------------------------------------------------

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

/// "1,3" -> {1,3}. The empty string is rejected; sets are nonempty on the CLI.
inline IndexSet parse_set_literal(const std::string& text, int n) {
    if (text.empty()) throw ParseError("set literal must not be empty");
    std::vector<int> members;
    for (const std::string& tok : split(text, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            members.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("bad set literal \"" + text + "\": \"" + tok +
                             "\" is not an index");
        }
    }
    try {
        return IndexSet::from_members(n, members);
    } catch (const std::invalid_argument& e) {
        throw ParseError("bad set literal \"" + text + "\": " + e.what());
    }
}

/// "nested:1;1,2" -> nested family {1} < {1,2}.
inline StableFamily parse_family_literal(const std::string& text, int n) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("family literal needs a kind prefix, e.g. \"nested:1;1,2\"");
    const std::string kind_name = text.substr(0, colon);
    std::vector<IndexSet> sets;
    for (const std::string& tok : split(text.substr(colon + 1), ';'))
        sets.push_back(parse_set_literal(tok, n));
    if (kind_name == "single") {
        if (sets.size() != 1) throw ParseError("single family takes exactly one set");
        return StableFamily::single(sets.front());
    }
    if (kind_name == "disjoint") return StableFamily::disjoint(std::move(sets));
    if (kind_name == "nested") return StableFamily::nested(std::move(sets));
    throw ParseError("unknown family kind \"" + kind_name +
                     "\" (expected single, disjoint or nested)");
}

inline Vec parse_vector_literal(const std::string& text) {
    Vec v;
    for (const std::string& tok : split(text, ',')) {
        try {
            std::size_t used = 0;
            const double d = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            v.push_back(d);
        } catch (const std::exception&) {
            throw ParseError("bad vector literal \"" + text + "\": \"" + tok +
                             "\" is not a number");
        }
    }
    return v;
}

inline SignatureMode parse_mode(const std::string& name) {
    if (name == "unconstrained") return SignatureMode::Unconstrained;
    if (name == "vanishing") return SignatureMode::VanishingInput;
    if (name == "nonvanishing") return SignatureMode::NonvanishingInput;
    throw ParseError("unknown signature mode \"" + name +
                     "\" (expected unconstrained, vanishing or nonvanishing)");
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline json to_json(const IndexSet& a) { return json(a.members()); }

inline json to_json(const StableSetReport& r) {
    json j;
    j["set"] = to_json(r.set);
    j["verdict"] = to_string(r.verdict);
    j["attractor"] = r.attractor;
    j["margin"] = r.margin;
    if (r.near_degenerate) j["near_degenerate"] = true;
    return j;
}

inline json to_json(const CouplingVerdict& v) {
    json j;
    j["holds"] = v.holds;
    if (v.witness) {
        j["witness"] = {{"index", v.witness->index}, {"lhs", v.witness->lhs},
                        {"rhs", v.witness->rhs}};
    } else {
        j["witness"] = nullptr;
    }
    if (v.degenerate) j["degenerate"] = true;
    return j;
}

inline json to_json(const Trajectory& t) {
    json segments = json::array();
    for (const TrajectorySegment& s : t.segments) {
        json seg;
        seg["part"] = to_json(s.part);
        seg["entry"] = s.entry_state;
        seg["duration"] = s.duration;
        seg["exit_coordinate"] = s.exit_coordinate ? json(*s.exit_coordinate) : json(nullptr);
        segments.push_back(std::move(seg));
    }
    json j;
    j["segments"] = std::move(segments);
    j["termination"] = to_string(t.termination);
    j["converged_part"] = t.converged_part ? to_json(*t.converged_part) : json(nullptr);
    j["final_state"] = t.final_state;
    j["elapsed"] = t.elapsed;
    j["switches"] = t.switches;
    return j;
}

inline json count_to_json(Int128 v) {
    // Counts above 2^53 are emitted as decimal strings to stay exact.
    constexpr Int128 kSafe = Int128{1} << 53;
    if (v >= -kSafe && v <= kSafe) return json(static_cast<long long>(v));
    return json(to_string(v));
}

}  // namespace glassnet
