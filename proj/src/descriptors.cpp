#include "pgz/descriptors.hpp"

#include <regex>

namespace pgz {

Mono mono_from_json(const json& j) {
    if (j.is_object()) {
        Q r = j.contains("rational") ? rational_from_json(j.at("rational")) : Q(1);
        Q e = j.contains("root") ? rational_from_json(j.at("root")) : Q(0);
        return Mono(r, e);
    }
    if (j.is_string()) {
        static const std::regex zre(R"(^\s*(-)?zeta\((\d+)\)(\^(\d+))?\s*$)");
        std::smatch m;
        std::string s = j.get<std::string>();
        if (std::regex_match(s, m, zre)) {
            int64_t n = std::stoll(m[2]);
            int64_t k = m[4].matched ? std::stoll(m[4]) : 1;
            if (n <= 0) fail(ErrorKind::InvalidInput, "zeta order must be positive");
            Mono z(1, Q(k, n));
            return m[1].matched ? z * Mono(-1) : z;
        }
        static const std::regex qre(R"(^\s*(-?\d+(/\d+)?)\s*$)");
        std::smatch mq;
        if (!std::regex_match(s, mq, qre)) fail(ErrorKind::InvalidInput, "not a Mono descriptor: " + s);
        Q q(mq[1].str(), 10);
        if (q.get_den() == 0) fail(ErrorKind::InvalidInput, "zero denominator: " + s);
        q.canonicalize();
        return Mono(q);
    }
    return Mono(rational_from_json(j));
}

LocalDatum datum_from_json(const json& j) {
    try {
        int64_t p = j.at("p").get<int64_t>();
        if (!is_prime(p)) fail(ErrorKind::InvalidInput, "p must be prime");
        QuadType t = quad_type_from(j.value("quad_type", std::string("split")));
        return LocalDatum::make(p, t, j.value("u0", int64_t(1)));
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("datum descriptor: ") + e.what());
    }
}

json datum_to_json(const LocalDatum& d) {
    json j{{"p", d.p}, {"quad_type", quad_type_name(d.type)}};
    if (d.type == QuadType::ramified) j["u0"] = d.u0;
    return j;
}

LocalField character_field(const LocalDatum& d) { return d.type == QuadType::split ? d.F() : d.Ew(); }

MulChar character_from_json(const json& j) {
    LocalDatum d = datum_from_json(j);
    LocalField K = character_field(d);
    Mono at = j.contains("at_uniformizer") ? mono_from_json(j.at("at_uniformizer")) : Mono::one();
    int c = j.value("conductor", 0);
    if (c == 0) return MulChar::unramified(K, at);
    std::vector<Q> gv;
    if (j.contains("gen_values")) {
        for (const auto& g : j.at("gen_values")) gv.push_back(rational_from_json(g));
        return MulChar::from_gen_values(K, c, gv, at);
    }
    MulChar chi;
    if (!sample_character(K, c, j.value("seed", uint64_t(1)), at, chi))
        fail(ErrorKind::InvalidCharacter, "no character of that conductor");
    return chi;
}

json character_to_json(const MulChar& chi, const LocalDatum& d) {
    json j = datum_to_json(d);
    j["conductor"] = chi.conductor();
    json g = json::array();
    for (const Q& q : chi.gen_values()) g.push_back(rational_to_json(q));
    j["gen_values"] = g;
    j["at_uniformizer"] = mono_to_json(chi.at_uniformizer());
    return j;
}

}  // namespace pgz
