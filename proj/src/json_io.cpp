#include "pgz/json_io.hpp"

namespace pgz {

namespace {

json int_to_json(const Z& z) {
    if (z.fits_slong_p()) return json(z.get_si());
    return json(z.get_str());
}

Z int_from_json(const json& j) {
    if (j.is_number_integer()) return Z(static_cast<long>(j.get<int64_t>()));
    if (j.is_string()) return Z(j.get<std::string>());
    fail(ErrorKind::InvalidInput, "expected integer in JSON, got " + j.dump());
}

json vec_to_json(const std::vector<Q>& v) {
    json arr = json::array();
    for (const auto& q : v) arr.push_back(rational_to_json(q));
    return arr;
}

std::vector<Q> vec_from_json(const json& j) {
    std::vector<Q> v;
    for (const auto& e : j) v.push_back(rational_from_json(e));
    return v;
}

}  // namespace

json rational_to_json(const Q& q) { return json::array({int_to_json(q.get_num()), int_to_json(q.get_den())}); }

Q rational_from_json(const json& j) {
    if (j.is_number_integer() || j.is_string()) return Q(int_from_json(j));
    if (!j.is_array() || j.size() != 2) fail(ErrorKind::InvalidInput, "rational must be [num, den]: " + j.dump());
    Z den = int_from_json(j[1]);
    if (den == 0) fail(ErrorKind::InvalidInput, "zero denominator");
    Q q(int_from_json(j[0]), den);
    q.canonicalize();
    return q;
}

json cyc_to_json(const CycNum& x) {
    json j;
    j["n"] = x.order();
    j["coeffs"] = vec_to_json(x.coeffs());
    if (x.has_sqrt()) {
        j["sqrt_q"] = x.sqrt_q();
        j["sqrt_coeffs"] = vec_to_json(x.sqrt_coeffs());
    } else {
        j["sqrt_q"] = nullptr;
        j["sqrt_coeffs"] = nullptr;
    }
    return j;
}

CycNum cyc_from_json(const json& j) {
    if (j.is_number_integer() || (j.is_array() && j.size() == 2 && !j[0].is_array()))
        return CycNum(rational_from_json(j));
    uint64_t n = j.at("n").get<uint64_t>();
    std::vector<Q> a = vec_from_json(j.at("coeffs"));
    int64_t q = 0;
    std::vector<Q> b;
    if (j.contains("sqrt_q") && !j["sqrt_q"].is_null()) {
        q = j["sqrt_q"].get<int64_t>();
        b = vec_from_json(j.at("sqrt_coeffs"));
    }
    return CycNum::from_parts(n, a, q, b);
}

json mono_to_json(const Mono& m) { return json{{"rational", rational_to_json(m.r)}, {"root", rational_to_json(m.e)}}; }

}  // namespace pgz
