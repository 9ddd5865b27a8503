// Batch front door: generation, scanning, certification, representation
// computations, and the partition/theta suites as named commands.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "conglab/criterion.hpp"
#include "conglab/engine.hpp"
#include "conglab/p1rep.hpp"
#include "conglab/records.hpp"

using namespace conglab;
using qseries::IntSeries;
using qseries::ModSeries;

namespace {

enum ExitCode : int {
    kOk = 0,
    kValidationFailure = 1,
    kUsage = 2,
    kPrecision = 3,
};

void emit_error(const std::string& kind, const std::string& message) {
    records::json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << '\n';
}

struct GenSpec {
    std::string form;
    int eta_power = 0;
    bool is_eta = false;
};

GenSpec parse_form_name(const std::string& name) {
    GenSpec g;
    g.form = name;
    if (name.rfind("eta^", 0) == 0) {
        g.is_eta = true;
        g.eta_power = std::stoi(name.substr(4));
    } else if (name != "delta" && name != "e4" && name != "e6" && name != "partition") {
        throw UsageError("unknown form: " + name + " (expected delta|e4|e6|eta^R|partition)");
    }
    return g;
}

std::optional<std::string> cache_dir() {
    const char* env = std::getenv("CONGRUENCE_LAB_CACHE");
    if (!env || !*env) return std::nullopt;
    return std::string(env);
}

std::string cache_key(const std::string& form, long long prec, u64 mod) {
    std::ostringstream os;
    os << form << "_p" << prec << (mod ? "_m" + std::to_string(mod) : "_int") << ".series.json";
    std::string s = os.str();
    for (auto& c : s)
        if (c == '^' || c == '-') c = '_';
    return s;
}

records::AnySeries generate(const GenSpec& g, i64 prec, u64 mod) {
    if (auto dir = cache_dir()) {
        auto path = std::filesystem::path(*dir) / cache_key(g.form, prec, mod);
        if (std::filesystem::exists(path)) return records::read_series_file(path.string());
    }
    records::AnySeries out = [&]() -> records::AnySeries {
        if (g.is_eta) {
            IntSeries s = forms::eta_power(g.eta_power, prec);
            if (mod) return qseries::reduce_mod(s, mod);
            return s;
        }
        if (g.form == "delta") {
            if (mod) return forms::delta_mod(mod, prec);
            return forms::delta(prec);
        }
        if (g.form == "e4" || g.form == "e6") {
            int k = g.form == "e4" ? 4 : 6;
            if (mod) return forms::eisenstein_mod(k, mod, prec);
            return forms::eisenstein(k, prec);
        }
        // partition: the sequence p(n) at integer exponents
        qseries::FormDescriptor d;
        d.recipe = "partition";
        d.twice_weight = -1;
        if (mod) {
            auto v = forms::partition_mod(mod, prec - 1);
            return ModSeries(qseries::ModDomain{mod}, 1, 0, prec, std::move(v), d);
        }
        auto v = forms::partition_exact(prec - 1);
        return IntSeries(qseries::IntDomain{}, 1, 0, prec, std::move(v), d);
    }();
    if (auto dir = cache_dir()) {
        std::error_code ec;
        std::filesystem::create_directories(*dir, ec);
        if (!ec) records::write_series_file((std::filesystem::path(*dir) / cache_key(g.form, prec, mod)).string(), out);
    }
    return out;
}

int cmd_gen(const std::string& form, i64 prec, u64 mod, const std::string& out_path) {
    auto series = generate(parse_form_name(form), prec, mod);
    records::write_series_file(out_path, series);
    return kOk;
}

ModSeries load_mod_series(const std::string& path, u64 ell) {
    auto any = records::read_series_file(path);
    if (std::holds_alternative<IntSeries>(any)) return qseries::reduce_mod(std::get<IntSeries>(any), ell);
    auto m = std::get<ModSeries>(any);
    if (m.domain().m != ell) throw UsageError("series modulus does not match --ell");
    return m;
}

int cmd_scan(const std::string& in, u64 ell, u64 max_modulus, i64 bound, u64 support, const std::string& out_path) {
    ModSeries f = load_mod_series(in, ell);
    const i64 denom = f.denom();
    auto grid = denom == 1 ? f : qseries::to_integer_grid(f);
    engine::ScanParams params{max_modulus, bound, support, std::nullopt};
    if (denom > 1)
        params.support_lattice =
            Progression{static_cast<u64>(denom), algebra::reduce_signed(grid.valuation(), static_cast<u64>(denom))};
    auto certs = engine::scan(grid, params);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw UsageError("cannot open for writing: " + out_path);
        os = &file;
    }
    records::write_certificates(*os, certs);
    // Fractional-grid inputs: report each claim in both coordinate systems.
    if (denom > 1) {
        for (const auto& c : certs) {
            if (!std::holds_alternative<Progression>(c.claim)) continue;
            const auto& raw = std::get<Progression>(c.claim);
            records::json note;
            note["info"] = "grid-translation";
            note["raw"] = claim_to_string(c.claim);
            auto eta = engine::eta_grid_progression(raw, static_cast<u64>(denom));
            if (eta)
                note["shifted"] = std::to_string(eta->modulus) + "n+" + std::to_string(eta->residue);
            else
                note["shifted"] = nullptr; // progression misses the shifted support
            std::cerr << note.dump() << '\n';
        }
    }
    return kOk;
}

std::string render_cell(const criterion::DeltaTableCell& cell, u64 p) {
    if (cell.diagonal) return cell.full_progression ? std::to_string(p) + "Z" : "-";
    if (cell.exponents.empty()) return "-";
    std::string s;
    for (size_t i = 0; i < cell.exponents.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(p) + "^" + std::to_string(cell.exponents[i]);
    }
    return s;
}

int cmd_certify_table(const std::vector<u64>& ells, const std::vector<u64>& primes, size_t count, i64 verify_bound,
                      const std::string& format) {
    auto table = criterion::delta_table(ells, primes, count, verify_bound);
    if (format == "records") {
        for (size_t i = 0; i < table.ells.size(); ++i)
            for (size_t j = 0; j < table.primes.size(); ++j) {
                records::json rec;
                rec["ell"] = table.ells[i];
                rec["p"] = table.primes[j];
                const auto& cell = table.cells[i][j];
                rec["diagonal"] = cell.diagonal;
                if (cell.diagonal)
                    rec["full_progression"] = cell.full_progression;
                else
                    rec["exponents"] = cell.exponents;
                std::cout << rec.dump() << '\n';
            }
        return kOk;
    }
    // human table
    std::cout << "ell\\p";
    for (u64 p : table.primes) std::cout << "\t" << p;
    std::cout << '\n';
    for (size_t i = 0; i < table.ells.size(); ++i) {
        std::cout << table.ells[i];
        for (size_t j = 0; j < table.primes.size(); ++j) std::cout << "\t" << render_cell(table.cells[i][j], table.primes[j]);
        std::cout << '\n';
    }
    return kOk;
}

int cmd_certify(const std::string& form, u64 ell, u64 p, u64 m, u64 beta, const std::string& out_path) {
    GenSpec g = parse_form_name(form);
    if (g.is_eta || g.form == "partition") throw UsageError("certification targets level-one integer-weight forms");
    u64 pm = 1;
    for (u64 i = 0; i <= m; ++i) pm *= p;
    const i64 prec = std::max<i64>(200, static_cast<i64>(pm) * 40);
    int k = g.form == "delta" ? 12 : (g.form == "e4" ? 4 : 6);
    ModSeries f = std::get<ModSeries>(generate(g, prec, ell));
    auto res = criterion::certify_claim(f, k, p, m, beta, ell < 5);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        os = &file;
    }
    records::write_certificates(*os, {res.certificate});
    if (!res.certified) {
        emit_error("refused", "claim is not certified by the criterion");
        return kValidationFailure;
    }
    return kOk;
}

int cmd_rep(const std::string& what, u64 modulus, u64 ell, i64 beta, const std::string& format) {
    if (what == "dims") {
        auto sp = p1rep::P1Space::make(modulus);
        auto F = algebra::cyclotomic_field_with_root(ell, modulus);
        auto W = p1rep::generate_submodule({p1rep::tm_vector(sp, F, beta)});
        if (format == "records") {
            records::json rec;
            rec["modulus"] = modulus;
            rec["ell"] = ell;
            rec["beta"] = beta;
            rec["p1_size"] = sp->size();
            rec["field_degree"] = F.ctx->degree;
            rec["dimension"] = W.dim();
            std::cout << rec.dump() << '\n';
        } else {
            std::cout << "P1(Z/" << modulus << "): " << sp->size() << " points, field F_" << ell << "^"
                      << F.ctx->degree << ", dim<tm(" << beta << ")> = " << W.dim() << '\n';
        }
        return kOk;
    }
    if (what == "membership") {
        auto sp = p1rep::P1Space::make(modulus);
        auto F = algebra::cyclotomic_field_with_root(ell, modulus);
        auto W = p1rep::generate_submodule({p1rep::tm_vector(sp, F, beta)});
        for (u64 b = 0; b < modulus; ++b) {
            bool member = p1rep::membership(p1rep::tm_vector(sp, F, static_cast<i64>(b)), W);
            if (format == "records") {
                records::json rec;
                rec["modulus"] = modulus;
                rec["ell"] = ell;
                rec["seed_beta"] = beta;
                rec["beta"] = b;
                rec["member"] = member;
                std::cout << rec.dump() << '\n';
            } else {
                std::cout << "tm(" << b << ") in <tm(" << beta << ")>: " << (member ? "yes" : "no") << '\n';
            }
        }
        return kOk;
    }
    if (what == "steinberg") {
        auto W = p1rep::steinberg_subspace(modulus, ell);
        auto v = p1rep::invariant_vector(W.space, W.field);
        bool socle = p1rep::membership(v, W);
        if (format == "records") {
            records::json rec;
            rec["p"] = modulus;
            rec["ell"] = ell;
            rec["dimension"] = W.dim();
            rec["contains_invariant"] = socle;
            std::cout << rec.dump() << '\n';
        } else {
            std::cout << "Steinberg at p=" << modulus << ", ell=" << ell << ": dim " << W.dim()
                      << ", invariant vector inside: " << (socle ? "yes" : "no") << '\n';
        }
        return kOk;
    }
    throw UsageError("rep subcommand must be dims|membership|steinberg");
}

int cmd_partition(const std::string& check, i64 bound) {
    bool all_ok = true;
    if (check == "ramanujan") {
        struct Case {
            u64 ell, a, b;
        };
        for (const Case& c : {Case{5, 5, 4}, Case{7, 7, 5}, Case{11, 11, 6}}) {
            auto pm = forms::partition_mod(c.ell, static_cast<i64>(c.a) * bound + static_cast<i64>(c.b));
            bool ok = true;
            i64 witness = -1;
            for (i64 n = 0; n <= bound; ++n) {
                if (pm[static_cast<size_t>(c.a * static_cast<u64>(n) + c.b)] != 0) {
                    ok = false;
                    witness = n;
                    break;
                }
            }
            all_ok = all_ok && ok;
            std::cout << "p(" << c.a << "n+" << c.b << ") = 0 mod " << c.ell << " for n <= " << bound << ": "
                      << (ok ? "pass" : "FAIL at n=" + std::to_string(witness)) << '\n';
        }
    } else if (check == "atkin") {
        const u64 ell = 13;
        const u64 stride = 11 * 11 * 11 * 13;
        const u64 offset = 237;
        auto pm = forms::partition_mod(ell, static_cast<i64>(stride) * bound + static_cast<i64>(offset));
        bool ok = true;
        i64 witness = -1;
        for (i64 n = 0; n <= bound; ++n) {
            if (pm[static_cast<size_t>(stride * static_cast<u64>(n) + offset)] != 0) {
                ok = false;
                witness = n;
                break;
            }
        }
        all_ok = ok;
        std::cout << "p(11^3*13*n+237) = 0 mod 13 for n <= " << bound << ": "
                  << (ok ? "pass" : "FAIL at n=" + std::to_string(witness)) << '\n';
    } else {
        throw UsageError("partition check must be ramanujan|atkin");
    }
    return all_ok ? kOk : kValidationFailure;
}

int cmd_theta_lab(u64 ell, i64 beta, int steps, int weight_cap, i64 verify_bound) {
    if (ell < 5) throw UsageError("theta-lab needs ell >= 5");
    const i64 prec = std::max<i64>(verify_bound + 1, 400);
    auto d = forms::delta_mod(ell, prec);
    ModSeries g1 = algebra::reduce_signed(beta, ell) == 0 ? hecke::theta_zero_kill(d) : hecke::theta_kill(d, beta);
    const int k_g = 12 + static_cast<int>((ell * ell - 1) / 2);
    // defining property: U_{ell, beta} g1 = 0
    auto sieved = qseries::sieve(g1, ell, algebra::reduce_signed(beta, ell));
    bool killed = sieved.is_identically_zero_on_window();
    std::cout << "U_{" << ell << "," << algebra::reduce_signed(beta, ell) << "} theta-kill(Delta): "
              << (killed ? "vanishes" : "NONZERO") << " to precision " << g1.precision() << '\n';
    if (!killed) return kValidationFailure;
    if (steps <= 0) return kOk;

    const i64 chain_window = std::min<i64>(verify_bound, 2000);
    auto [g2, k2] = criterion::u_ell_preimage(g1, k_g, steps, weight_cap, chain_window);
    ModSeries u = g2;
    for (int s = 0; s < steps; ++s) u = qseries::u_operator(u, ell);
    bool nonzero = !u.is_identically_zero_on_window();
    auto chained = qseries::sieve(u, ell, algebra::reduce_signed(beta, ell));
    bool chain_killed = chained.is_identically_zero_on_window();
    int filt = criterion::filtration(g2, k2);
    std::cout << "preimage weight " << k2 << ", U^" << steps << " nonzero: " << (nonzero ? "yes" : "no")
              << ", U_{" << ell << "," << algebra::reduce_signed(beta, ell) << "} U^" << steps
              << " vanishes: " << (chain_killed ? "yes" : "no") << " (checked to " << u.precision() << ")\n";
    std::cout << "filtration of the preimage: " << filt << '\n';
    return (nonzero && chain_killed) ? kOk : kValidationFailure;
}

int cmd_validate(const std::string& certs_path, const std::string& in_path) {
    std::ifstream is(certs_path, std::ios::binary);
    if (!is) throw UsageError("cannot open for reading: " + certs_path);
    auto certs = records::read_certificates(is);
    if (certs.empty()) {
        std::cout << "no certificates\n";
        return kOk;
    }
    u64 ell = certs[0].ell;
    ModSeries data = load_mod_series(in_path, ell);
    auto grid = data.denom() == 1 ? data : qseries::to_integer_grid(data);
    auto report = engine::cross_validate(certs, grid);
    for (const auto& item : report.items) {
        records::json rec;
        rec["certificate_index"] = item.certificate_index;
        rec["reason"] = item.reason;
        rec["witness"] = item.witness;
        std::cout << rec.dump() << '\n';
    }
    std::cout << "checked " << report.checked << " certificates, " << report.items.size() << " discrepancies\n";
    return report.ok() ? kOk : kValidationFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact q-expansions, congruence scanning and certification for classical modular forms"};
    app.require_subcommand(1);

    // gen
    std::string gen_form, gen_out;
    i64 gen_prec = 100;
    u64 gen_mod = 0;
    auto* gen = app.add_subcommand("gen", "generate a q-expansion and write the series cache file");
    gen->add_option("--form", gen_form, "delta|e4|e6|eta^R|partition")->required();
    gen->add_option("--prec", gen_prec, "precision window")->required();
    gen->add_option("--mod", gen_mod, "reduce modulo this integer");
    gen->add_option("--out", gen_out, "output path")->required();

    // scan
    std::string scan_in, scan_out;
    u64 scan_ell = 5, scan_maxmod = 64, scan_support = 25;
    i64 scan_bound = 10000;
    auto* sc = app.add_subcommand("scan", "scan a series for maximal congruences");
    sc->add_option("--in", scan_in)->required();
    sc->add_option("--ell", scan_ell)->required();
    sc->add_option("--max-modulus", scan_maxmod)->required();
    sc->add_option("--bound", scan_bound)->required();
    sc->add_option("--support", scan_support);
    sc->add_option("--out", scan_out, "certificate file (default stdout)");

    // certify-table
    std::vector<u64> ct_ells, ct_primes;
    size_t ct_count = 2;
    i64 ct_bound = 100000;
    std::string ct_format = "human";
    auto* ct = app.add_subcommand("certify-table", "maximal-congruence table for the discriminant form");
    ct->add_option("--ell", ct_ells)->required()->delimiter(',');
    ct->add_option("--primes", ct_primes)->required()->delimiter(',');
    ct->add_option("--count", ct_count);
    ct->add_option("--verify-bound", ct_bound);
    ct->add_option("--format", ct_format)->check(CLI::IsMember({"human", "records"}));

    // certify
    std::string cf_form = "delta", cf_out;
    u64 cf_ell = 5, cf_p = 2, cf_m = 1, cf_beta = 0;
    auto* cf = app.add_subcommand("certify", "certify a gap congruence through the Hecke criterion");
    cf->add_option("--form", cf_form)->required();
    cf->add_option("--ell", cf_ell)->required();
    cf->add_option("--p", cf_p)->required();
    cf->add_option("--m", cf_m)->required();
    cf->add_option("--beta", cf_beta);
    cf->add_option("--out", cf_out);

    // rep
    std::string rep_what, rep_format = "human";
    u64 rep_modulus = 5, rep_ell = 3;
    i64 rep_beta = 0;
    auto* rp = app.add_subcommand("rep", "permutation module computations on P1(Z/M)");
    rp->add_option("what", rep_what, "dims|membership|steinberg")->required();
    rp->add_option("--modulus", rep_modulus)->required();
    rp->add_option("--ell", rep_ell)->required();
    rp->add_option("--beta", rep_beta);
    rp->add_option("--format", rep_format)->check(CLI::IsMember({"human", "records"}));

    // partition
    std::string pt_check;
    i64 pt_bound = 1000;
    auto* pt = app.add_subcommand("partition", "verify partition congruences");
    pt->add_option("--check", pt_check, "ramanujan|atkin")->required();
    pt->add_option("--bound", pt_bound);

    // theta-lab
    u64 tl_ell = 17;
    i64 tl_beta = 3, tl_verify = 10000;
    int tl_steps = 0, tl_cap = 4000;
    auto* tl = app.add_subcommand("theta-lab", "theta-operator congruence constructions");
    tl->add_option("--ell", tl_ell)->required();
    tl->add_option("--beta", tl_beta)->required();
    tl->add_option("--preimage-steps", tl_steps);
    tl->add_option("--weight-cap", tl_cap);
    tl->add_option("--verify-bound", tl_verify);

    // validate
    std::string vd_certs, vd_in;
    auto* vd = app.add_subcommand("validate", "re-verify certificates against coefficient data");
    vd->add_option("--certs", vd_certs)->required();
    vd->add_option("--in", vd_in)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0; // --help
        emit_error("usage", e.what());
        return kUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_form, gen_prec, gen_mod, gen_out);
        if (sc->parsed()) return cmd_scan(scan_in, scan_ell, scan_maxmod, scan_bound, scan_support, scan_out);
        if (ct->parsed()) return cmd_certify_table(ct_ells, ct_primes, ct_count, ct_bound, ct_format);
        if (cf->parsed()) return cmd_certify(cf_form, cf_ell, cf_p, cf_m, cf_beta, cf_out);
        if (rp->parsed()) return cmd_rep(rep_what, rep_modulus, rep_ell, rep_beta, rep_format);
        if (pt->parsed()) return cmd_partition(pt_check, pt_bound);
        if (tl->parsed()) return cmd_theta_lab(tl_ell, tl_beta, tl_steps, tl_cap, tl_verify);
        if (vd->parsed()) return cmd_validate(vd_certs, vd_in);
    } catch (const PrecisionError& e) {
        emit_error("precision", e.what());
        return kPrecision;
    } catch (const UsageError& e) {
        emit_error("usage", e.what());
        return kUsage;
    } catch (const DomainError& e) {
        emit_error("domain", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        emit_error("error", e.what());
        return kUsage;
    }
    return kUsage;
}
