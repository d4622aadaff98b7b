#pragma once

// Family specs as JSON:
//   {"kind":"explicit","N":4,"sets":[[1,2],[3]]}
//   {"kind":"homogeneous","N":10,"d":3}    {"kind":"upto","N":10,"d":3}
//   {"kind":"prime-singletons","N":100}    {"kind":"squarefree","N":60}
// plus the shorthand homog:N:d, upto:N:d, primes:N, sqfree:N, file:<path>.

#include "cube/core.hpp"
#include "cube/error.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cube {

using Json = nlohmann::ordered_json;

inline FamilyKind family_kind_from_string(const std::string& s) {
    if (s == "explicit") return FamilyKind::explicit_list;
    if (s == "homogeneous") return FamilyKind::homogeneous;
    if (s == "upto") return FamilyKind::up_to;
    if (s == "prime-singletons") return FamilyKind::prime_singletons;
    if (s == "squarefree") return FamilyKind::square_free;
    throw DomainError("unknown family kind '" + s + "'");
}

inline Json family_spec_to_json(const FamilySpec& spec) {
    Json j;
    j["kind"] = to_string(spec.kind);
    j["N"] = spec.n;
    if (spec.kind == FamilyKind::homogeneous || spec.kind == FamilyKind::up_to) j["d"] = spec.d;
    if (spec.kind == FamilyKind::explicit_list) j["sets"] = spec.sets;
    return j;
}

inline FamilySpec family_spec_from_json(const Json& j) {
    try {
        FamilySpec spec;
        spec.kind = family_kind_from_string(j.at("kind").get<std::string>());
        spec.n = j.at("N").get<int>();
        if (spec.kind == FamilyKind::homogeneous || spec.kind == FamilyKind::up_to) spec.d = j.at("d").get<int>();
        if (spec.kind == FamilyKind::explicit_list) spec.sets = j.at("sets").get<std::vector<std::vector<int>>>();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed family JSON: ") + e.what());
    }
}

/// Explicit listing of a materialized family (1-based indices).
inline Json family_to_json(const SupportFamily& family) {
    Json sets = Json::array();
    for (const auto& s : family.sets()) sets.push_back(s.indices());
    Json j;
    j["kind"] = "explicit";
    j["N"] = family.dimension();
    j["sets"] = std::move(sets);
    return j;
}

namespace detail {

inline int parse_int(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw DomainError("bad integer '" + s + "' in " + what);
    return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, sep)) out.push_back(part);
    return out;
}

}  // namespace detail

inline FamilySpec load_family_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open family file '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("family file '" + path + "' is not valid JSON: " + e.what());
    }
    return family_spec_from_json(j);
}

/// Shorthand or a path to a JSON file.
inline FamilySpec parse_family(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (colon != std::string::npos) {
        const std::string rest = text.substr(colon + 1);
        if (head == "file") return load_family_file(rest);
        const auto parts = detail::split(rest, ':');
        if (head == "homog" || head == "upto") {
            if (parts.size() != 2) throw DomainError("expected " + head + ":N:d");
            const int n = detail::parse_int(parts[0], text);
            const int d = detail::parse_int(parts[1], text);
            return head == "homog" ? FamilySpec::homogeneous(n, d) : FamilySpec::up_to(n, d);
        }
        if (head == "primes" || head == "sqfree") {
            if (parts.size() != 1) throw DomainError("expected " + head + ":N");
            const int n = detail::parse_int(parts[0], text);
            return head == "primes" ? FamilySpec::prime_singletons(n) : FamilySpec::square_free(n);
        }
    }
    return load_family_file(text);
}

}  // namespace cube
