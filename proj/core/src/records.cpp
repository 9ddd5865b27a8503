#include "conglab/records.hpp"

#include <fstream>
#include <sstream>

namespace conglab::records {

namespace {

json descriptor_to_json(const qseries::FormDescriptor& d) {
    json j;
    j["recipe"] = d.recipe;
    j["twice_weight"] = d.twice_weight;
    j["level"] = d.level;
    j["character"] = json{{"kronecker", d.character.kron_t}, {"modulus", d.character.modulus}};
    return j;
}

qseries::FormDescriptor descriptor_from_json(const json& j) {
    qseries::FormDescriptor d;
    d.recipe = j.at("recipe").get<std::string>();
    d.twice_weight = j.at("twice_weight").get<int>();
    d.level = j.at("level").get<u64>();
    d.character.kron_t = j.at("character").at("kronecker").get<long long>();
    d.character.modulus = j.at("character").at("modulus").get<u64>();
    return d;
}

template <class S>
json series_header(const S& s) {
    json j;
    j["descriptor"] = descriptor_to_json(s.descriptor());
    return j;
}

} // namespace

json series_to_json(const qseries::IntSeries& s) {
    json j = series_header(s);
    j["domain"] = "int";
    j["denom"] = s.denom();
    j["valuation"] = s.valuation();
    j["precision"] = s.precision();
    std::vector<std::string> coeffs;
    coeffs.reserve(s.raw().size());
    for (const auto& c : s.raw()) coeffs.push_back(c.get_str());
    j["coefficients"] = coeffs;
    return j;
}

json series_to_json(const qseries::ModSeries& s) {
    json j = series_header(s);
    j["domain"] = "mod";
    j["modulus"] = s.domain().m;
    j["denom"] = s.denom();
    j["valuation"] = s.valuation();
    j["precision"] = s.precision();
    std::vector<std::string> coeffs;
    coeffs.reserve(s.raw().size());
    for (u64 c : s.raw()) coeffs.push_back(std::to_string(c));
    j["coefficients"] = coeffs;
    return j;
}

AnySeries series_from_json(const json& j) {
    const auto domain = j.at("domain").get<std::string>();
    const auto denom = j.at("denom").get<i64>();
    const auto val = j.at("valuation").get<i64>();
    const auto prec = j.at("precision").get<i64>();
    const auto& coeffs = j.at("coefficients");
    auto desc = descriptor_from_json(j.at("descriptor"));
    if (domain == "int") {
        std::vector<mpz_class> c;
        c.reserve(coeffs.size());
        for (const auto& v : coeffs) c.emplace_back(v.get<std::string>());
        return qseries::IntSeries(qseries::IntDomain{}, denom, val, prec, std::move(c), std::move(desc));
    }
    if (domain == "mod") {
        const u64 m = j.at("modulus").get<u64>();
        std::vector<u64> c;
        c.reserve(coeffs.size());
        for (const auto& v : coeffs) c.push_back(std::stoull(v.get<std::string>()));
        return qseries::ModSeries(qseries::ModDomain{m}, denom, val, prec, std::move(c), std::move(desc));
    }
    throw UsageError("unknown series domain: " + domain);
}

void write_series_file(const std::string& path, const AnySeries& s) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw UsageError("cannot open for writing: " + path);
    json j = std::visit([](const auto& x) { return series_to_json(x); }, s);
    os << j.dump() << '\n';
}

AnySeries read_series_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw UsageError("cannot open for reading: " + path);
    json j;
    is >> j;
    return series_from_json(j);
}

namespace {

json analysis_to_json(const LPolyAnalysis& a) {
    json j;
    j["p"] = a.p;
    j["ell"] = a.ell;
    j["lambda"] = a.lambda_rational ? json(a.lambda) : json(a.lambda_repr);
    j["c"] = a.c;
    switch (a.kind) {
        case LPolyAnalysis::Kind::Repeated: j["case"] = "repeated"; break;
        case LPolyAnalysis::Kind::Split: j["case"] = "split"; break;
        case LPolyAnalysis::Kind::Irreducible: j["case"] = "irreducible"; break;
    }
    j["period"] = a.period;
    if (a.kind == LPolyAnalysis::Kind::Split) {
        j["alpha"] = a.alpha;
        j["beta"] = a.beta;
    } else if (a.kind == LPolyAnalysis::Kind::Irreducible && a.lambda_rational) {
        j["alpha"] = json::array({a.alpha_ext[0], a.alpha_ext[1]});
    }
    return j;
}

LPolyAnalysis analysis_from_json(const json& j) {
    LPolyAnalysis a;
    a.p = j.at("p").get<u64>();
    a.ell = j.at("ell").get<u64>();
    if (j.at("lambda").is_string()) {
        a.lambda_rational = false;
        a.lambda_repr = j.at("lambda").get<std::string>();
    } else {
        a.lambda = j.at("lambda").get<u64>();
        a.lambda_repr = std::to_string(a.lambda);
    }
    a.c = j.at("c").get<u64>();
    const auto kase = j.at("case").get<std::string>();
    if (kase == "repeated")
        a.kind = LPolyAnalysis::Kind::Repeated;
    else if (kase == "split")
        a.kind = LPolyAnalysis::Kind::Split;
    else
        a.kind = LPolyAnalysis::Kind::Irreducible;
    a.period = j.at("period").get<u64>();
    if (a.kind == LPolyAnalysis::Kind::Split) {
        a.alpha = j.at("alpha").get<u64>();
        a.beta = j.at("beta").get<u64>();
    } else if (a.kind == LPolyAnalysis::Kind::Irreducible && j.contains("alpha")) {
        a.alpha_ext = {j.at("alpha")[0].get<u64>(), j.at("alpha")[1].get<u64>()};
    }
    return a;
}

} // namespace

json certificate_to_json(const CongruenceCertificate& c) {
    json j;
    j["form"] = descriptor_to_json(c.form);
    j["ell"] = c.ell;
    json claim;
    if (std::holds_alternative<Progression>(c.claim)) {
        const auto& p = std::get<Progression>(c.claim);
        claim["kind"] = "progression";
        claim["modulus"] = p.modulus;
        claim["residue"] = p.residue;
    } else {
        const auto& g = std::get<GapProgression>(c.claim);
        claim["kind"] = "gap";
        claim["stride"] = g.stride;
        claim["offset"] = g.offset;
        claim["gap_prime"] = g.gap_prime;
    }
    j["claim"] = claim;
    json ev;
    if (std::holds_alternative<EvidenceVerified>(c.evidence)) {
        const auto& e = std::get<EvidenceVerified>(c.evidence);
        ev["kind"] = "verified_to_bound";
        ev["bound"] = e.bound;
        ev["support"] = e.support;
    } else if (std::holds_alternative<EvidenceHecke>(c.evidence)) {
        const auto& e = std::get<EvidenceHecke>(c.evidence);
        ev["kind"] = "certified_hecke";
        ev["certified"] = e.certified;
        json comps = json::array();
        for (const auto& cc : e.components) {
            json cj;
            cj["analysis"] = analysis_to_json(cc.analysis);
            cj["multiplicity"] = cc.multiplicity;
            cj["exponent_ok"] = cc.exponent_ok;
            comps.push_back(cj);
        }
        ev["components"] = comps;
    } else {
        const auto& e = std::get<EvidenceDerived>(c.evidence);
        ev["kind"] = "derived_by_rule";
        ev["rule"] = e.rule;
        ev["parent"] = e.parent ? certificate_to_json(*e.parent) : json();
    }
    j["evidence"] = ev;
    json wits = json::array();
    for (const auto& w : c.witnesses) {
        json wj;
        wj["modulus"] = w.covering.modulus;
        wj["residue"] = w.covering.residue;
        wj["index"] = w.index;
        wits.push_back(wj);
    }
    j["witnesses"] = wits;
    return j;
}

CongruenceCertificate certificate_from_json(const json& j) {
    CongruenceCertificate c;
    c.form = descriptor_from_json(j.at("form"));
    c.ell = j.at("ell").get<u64>();
    const auto& claim = j.at("claim");
    if (claim.at("kind").get<std::string>() == "progression") {
        c.claim = Progression{claim.at("modulus").get<u64>(), claim.at("residue").get<u64>()};
    } else {
        c.claim = GapProgression{claim.at("stride").get<u64>(), claim.at("offset").get<u64>(), claim.at("gap_prime").get<u64>()};
    }
    const auto& ev = j.at("evidence");
    const auto kind = ev.at("kind").get<std::string>();
    if (kind == "verified_to_bound") {
        c.evidence = EvidenceVerified{ev.at("bound").get<i64>(), ev.at("support").get<u64>()};
    } else if (kind == "certified_hecke") {
        EvidenceHecke e;
        e.certified = ev.at("certified").get<bool>();
        for (const auto& cj : ev.at("components")) {
            ComponentCertificate cc;
            cc.analysis = analysis_from_json(cj.at("analysis"));
            cc.multiplicity = cj.at("multiplicity").get<size_t>();
            cc.exponent_ok = cj.at("exponent_ok").get<bool>();
            e.components.push_back(std::move(cc));
        }
        c.evidence = std::move(e);
    } else if (kind == "derived_by_rule") {
        EvidenceDerived e;
        e.rule = ev.at("rule").get<std::string>();
        if (ev.contains("parent") && !ev.at("parent").is_null())
            e.parent = std::make_shared<const CongruenceCertificate>(certificate_from_json(ev.at("parent")));
        c.evidence = std::move(e);
    } else {
        throw UsageError("unknown evidence kind: " + kind);
    }
    for (const auto& wj : j.at("witnesses")) {
        MaximalityWitness w;
        w.covering = Progression{wj.at("modulus").get<u64>(), wj.at("residue").get<u64>()};
        w.index = wj.at("index").get<i64>();
        c.witnesses.push_back(w);
    }
    return c;
}

void write_certificates(std::ostream& os, const std::vector<CongruenceCertificate>& certs) {
    for (const auto& c : certs) os << certificate_to_json(c).dump() << '\n';
}

std::vector<CongruenceCertificate> read_certificates(std::istream& is) {
    std::vector<CongruenceCertificate> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        out.push_back(certificate_from_json(json::parse(line)));
    }
    return out;
}

} // namespace conglab::records
