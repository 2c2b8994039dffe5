#include "berkdil/instance.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace berkdil {

namespace {

using ojson = nlohmann::ordered_json;

bool is_small_prime(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

unsigned long get_prime(const ojson& j, const std::string& field) {
    if (!j.contains(field)) throw BadInput(field, "required");
    const ojson& v = j.at(field);
    if (!v.is_number_integer()) throw BadInput(field, "expected an integer");
    long long n = v.get<long long>();
    if (n < 2 || !is_small_prime(static_cast<unsigned long>(n)))
        throw BadInput(field, "must be a prime >= 2");
    return static_cast<unsigned long>(n);
}

ValQ get_finite_valq(const ojson& v, const std::string& field) {
    if (v.is_number_integer()) return ValQ(v.get<long>());
    if (v.is_string()) {
        auto q = ValQ::parse(v.get<std::string>());
        if (q && !q->is_infinity()) return *q;
    }
    throw BadInput(field, "expected a rational (integer or \"a/b\" string)");
}

long get_count(const ojson& v, const std::string& field) {
    if (!v.is_number_integer()) throw BadInput(field, "expected an integer");
    long long n = v.get<long long>();
    if (n < 0) throw BadInput(field, "must be nonnegative");
    return static_cast<long>(n);
}

void parse_points(const ojson& j, Instance& inst) {
    if (!j.contains("points")) throw BadInput("points", "required");
    const ojson& pts = j.at("points");
    if (!pts.is_array() || pts.empty())
        throw BadInput("points", "expected a nonempty array of [label, value] pairs");
    std::set<std::string> seen;
    for (size_t i = 0; i < pts.size(); ++i) {
        const ojson& e = pts[i];
        const std::string where = "points[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw BadInput(where, "expected a [label, value] pair of strings");
        std::string label = e[0].get<std::string>();
        std::string value = e[1].get<std::string>();
        if (label.empty()) throw BadInput(where, "label must be nonempty");
        if (!seen.insert(label).second)
            throw BadInput("points", "duplicate label \"" + label + "\"");
        if (value != "inf" && !ExactQ::parse(value))
            throw BadInput("points." + label, "expected \"inf\" or a rational \"a/b\"");
        inst.labels.push_back(std::move(label));
        inst.values.push_back(std::move(value));
    }
}

void parse_pairing(const ojson& j, Instance& inst) {
    if (!j.contains("pairing") || j.at("pairing").is_null()) return;
    const ojson& pr = j.at("pairing");
    if (!pr.is_array()) throw BadInput("pairing", "expected an array of [a, b] label pairs");
    std::set<std::string> used;
    std::vector<std::array<std::string, 2>> blocks;
    for (size_t i = 0; i < pr.size(); ++i) {
        const ojson& e = pr[i];
        const std::string where = "pairing[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw BadInput(where, "expected an [a, b] pair of labels");
        std::array<std::string, 2> blk{e[0].get<std::string>(), e[1].get<std::string>()};
        for (const std::string& l : blk) {
            if (std::find(inst.labels.begin(), inst.labels.end(), l) == inst.labels.end())
                throw BadInput(where, "unknown label \"" + l + "\"");
            if (!used.insert(l).second)
                throw BadInput("pairing", "label \"" + l + "\" appears twice");
        }
        blocks.push_back(std::move(blk));
    }
    if (2 * blocks.size() != inst.labels.size())
        throw BadInput("pairing", "must partition the labels into 2-blocks");
    inst.pairing = std::move(blocks);
}

} // namespace

PointSet Instance::point_set() const {
    std::vector<ProjPoint> pts;
    pts.reserve(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] == "inf") {
            pts.push_back(ProjPoint::infinity());
            continue;
        }
        auto q = ExactQ::parse(values[i]);
        if (!q) throw BadInput("points." + labels[i], "expected \"inf\" or a rational \"a/b\"");
        pts.push_back(ProjPoint::finite(Scalar(prime_ell, *q)));
    }
    return PointSet::make(prime_ell, labels, std::move(pts));
}

Pairing Instance::pairing_blocks(const PointSet& S) const {
    if (!pairing) throw BadInput("pairing", "required here but absent");
    Pairing P;
    for (const auto& blk : *pairing) {
        int a = S.find_label(blk[0]);
        int b = S.find_label(blk[1]);
        if (a < 0 || b < 0)
            throw BadInput("pairing", "label \"" + (a < 0 ? blk[0] : blk[1]) +
                                          "\" missing from the point set");
        P.pairs.push_back({a, b});
    }
    return P;
}

Instance instance_from_json(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw BadInput("json", e.what());
    }
    if (!j.is_object()) throw BadInput("json", "expected a JSON object");

    static const std::set<std::string> known = {"prime_ell", "p",       "vp",
                                                "points",    "pairing", "optimal",
                                                "precision", "max_words"};
    for (const auto& item : j.items())
        if (!known.count(item.key())) throw BadInput(item.key(), "unknown field");

    Instance inst;
    inst.prime_ell = get_prime(j, "prime_ell");
    inst.p = get_prime(j, "p");
    if (j.contains("vp") && !j.at("vp").is_null()) {
        inst.vp = get_finite_valq(j.at("vp"), "vp");
        inst.vp_overridden = true;
    } else {
        inst.vp = inst.default_vp();
    }
    parse_points(j, inst);
    parse_pairing(j, inst);
    if (j.contains("optimal")) {
        if (!j.at("optimal").is_boolean()) throw BadInput("optimal", "expected a boolean");
        inst.optimal = j.at("optimal").get<bool>();
    }
    if (j.contains("precision")) inst.precision = get_count(j.at("precision"), "precision");
    if (j.contains("max_words"))
        inst.max_words = static_cast<int>(get_count(j.at("max_words"), "max_words"));
    return inst;
}

Instance instance_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInput("file", "cannot read \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return instance_from_json(buf.str());
}

std::string instance_to_json(const Instance& inst) {
    ojson j;
    j["prime_ell"] = inst.prime_ell;
    j["p"] = inst.p;
    if (inst.vp_overridden) j["vp"] = inst.vp.str();
    ojson pts = ojson::array();
    for (size_t i = 0; i < inst.labels.size(); ++i)
        pts.push_back(ojson::array({inst.labels[i], inst.values[i]}));
    j["points"] = std::move(pts);
    if (inst.pairing) {
        ojson pr = ojson::array();
        for (const auto& blk : *inst.pairing) pr.push_back(ojson::array({blk[0], blk[1]}));
        j["pairing"] = std::move(pr);
    }
    j["optimal"] = inst.optimal;
    j["precision"] = inst.precision;
    j["max_words"] = inst.max_words;
    return j.dump(2) + "\n";
}

} // namespace berkdil
