// Command-line front end: verify protocols, run Monte Carlo trials, execute
// and check gate networks, and run the table/geometry constructor.
//
// Exit codes: 0 success, 1 domain failure (violations, infeasible geometry,
// imperfect retrodiction), 2 usage or parse errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "retroq/builtins.hpp"
#include "retroq/circuit.hpp"
#include "retroq/constraints.hpp"
#include "retroq/construct.hpp"
#include "retroq/network.hpp"
#include "retroq/protocol.hpp"
#include "retroq/protocol_io.hpp"

namespace {

using nlohmann::json;

// All randomness flows from --seed; its default is fixed, never wall clock.
constexpr std::uint64_t kDefaultSeed = 1729;

constexpr int kExitSuccess = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw retroq::ParseError("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(bool as_json, const json& record, const std::string& text) {
    if (as_json)
        std::cout << record.dump() << "\n";
    else
        std::cout << text << "\n";
}

const char* finding_kind(retroq::VerifyFinding::Kind kind) {
    switch (kind) {
        case retroq::VerifyFinding::Kind::support_contradiction: return "support-contradiction";
        case retroq::VerifyFinding::Kind::decomposition_residual: return "decomposition-residual";
        case retroq::VerifyFinding::Kind::orthonormality: return "orthonormality";
    }
    return "unknown";
}

void print_finding(bool as_json, const char* severity, const retroq::VerifyFinding& f) {
    json record = {{"record", "verify-finding"},
                   {"severity", severity},
                   {"kind", finding_kind(f.kind)},
                   {"magnitude", f.magnitude}};
    char text[160];
    if (f.kind == retroq::VerifyFinding::Kind::orthonormality) {
        std::snprintf(text, sizeof text, "  %s %s residual %.3e", severity, finding_kind(f.kind),
                      f.magnitude);
    } else if (f.kind == retroq::VerifyFinding::Kind::decomposition_residual) {
        record["axis"] = f.axis + 1;
        record["eta"] = f.eta;
        std::snprintf(text, sizeof text, "  %s %s axis %d eta %+d residual %.3e", severity,
                      finding_kind(f.kind), f.axis + 1, f.eta, f.magnitude);
    } else {
        record["axis"] = f.axis + 1;
        record["eta"] = f.eta;
        record["outcome"] = f.outcome + 1;
        std::snprintf(text, sizeof text, "  %s %s outcome %d axis %d eta %+d overlap %.3e",
                      severity, finding_kind(f.kind), f.outcome + 1, f.axis + 1, f.eta,
                      f.magnitude);
    }
    emit(as_json, record, text);
}

void print_errata(bool as_json, const retroq::ErrataReport& report) {
    if (!as_json) std::cout << "errata audit for '" << report.name << "':\n";
    json summary = {{"record", "errata-summary"},
                    {"name", report.name},
                    {"clean", report.clean},
                    {"entries", report.entries.size()},
                    {"down_columns_exchanged", report.down_columns_exchanged}};
    if (!report.row_permutation.empty()) summary["row_permutation"] = report.row_permutation;
    if (as_json) std::cout << summary.dump() << "\n";
    if (!as_json && !report.row_permutation.empty()) {
        std::cout << "  tabulated row order maps to working rows:";
        for (int p : report.row_permutation) std::cout << " " << p;
        std::cout << "\n";
    }
    if (!as_json && report.down_columns_exchanged)
        std::cout << "  down-sector columns are exchanged relative to the consistent form\n";
    for (const std::string& note : report.notes)
        emit(as_json, json{{"record", "errata-note"}, {"name", report.name}, {"note", note}},
             "  note: " + note);
    for (const retroq::ErrataEntry& e : report.entries) {
        json record = {{"record", "errata-finding"},
                       {"name", report.name},
                       {"kind", e.kind},
                       {"location", e.location},
                       {"magnitude", e.magnitude},
                       {"found", {e.found.real(), e.found.imag()}},
                       {"consistent", {e.consistent.real(), e.consistent.imag()}}};
        std::string loc;
        for (int v : e.location) loc += (loc.empty() ? "" : ",") + std::to_string(v);
        char text[200];
        std::snprintf(text, sizeof text, "  %s at (%s) magnitude %.6f found %.6f%+.6fi", e.kind.c_str(),
                      loc.c_str(), e.magnitude, e.found.real(), e.found.imag());
        emit(as_json, record, text);
    }
    if (!as_json && report.clean) std::cout << "  no discrepancies\n";
}

struct ProtocolSource {
    std::string builtin;
    std::string path;

    // true when the protocol came from a builtin name (errata data exists)
    bool is_builtin() const { return !builtin.empty(); }

    retroq::LoadedProtocol load() const {
        if (is_builtin())
            return {builtin, retroq::builtin_protocol(builtin)};
        return retroq::load_protocol(read_file(path));
    }
};

int cmd_verify(const ProtocolSource& source, double floor, double warn_floor, bool as_json) {
    const retroq::LoadedProtocol loaded = source.load();
    const retroq::VerifyReport report = retroq::verify_protocol(loaded.protocol, floor, warn_floor);

    emit(as_json,
         json{{"record", "verify-summary"},
              {"name", loaded.name},
              {"violations", report.violations.size()},
              {"warnings", report.warnings.size()},
              {"orthonormality", report.orthonormality},
              {"worst_decomposition", report.worst_decomposition},
              {"worst_overlap", report.worst_overlap},
              {"passed", report.passed()}},
         "protocol '" + loaded.name + "': " + std::to_string(report.violations.size()) +
             " violations, " + std::to_string(report.warnings.size()) + " warnings");
    for (const auto& f : report.violations) print_finding(as_json, "violation", f);
    for (const auto& f : report.warnings) print_finding(as_json, "warning", f);

    if (source.is_builtin()) print_errata(as_json, retroq::errata_check(source.builtin));
    return report.passed() ? kExitSuccess : kExitDomain;
}

int cmd_simulate(const ProtocolSource& source, std::uint64_t trials, std::uint64_t seed,
                 bool records, bool as_json) {
    const retroq::LoadedProtocol loaded = source.load();
    const retroq::VerifyReport verdict = retroq::verify_protocol(loaded.protocol);

    retroq::TrialOptions options;
    options.collect_records = records;
    const retroq::TrialStatistics stats =
        retroq::run_trials(loaded.protocol, trials, seed, options);

    emit(as_json,
         json{{"record", "trial-summary"},
              {"name", loaded.name},
              {"trials", stats.trials},
              {"successes", stats.successes},
              {"success_rate", stats.success_rate()},
              {"seed", seed},
              {"verified", verdict.passed()}},
         "protocol '" + loaded.name + "': " + std::to_string(stats.successes) + "/" +
             std::to_string(stats.trials) + " correct retrodictions (seed " +
             std::to_string(seed) + ", " + (verdict.passed() ? "verified" : "UNVERIFIED") + ")");

    for (std::size_t l = 0; l < stats.axis_chosen.size(); ++l) {
        char text[120];
        std::snprintf(text, sizeof text, "  axis %zu: chosen %llu, correct %llu", l + 1,
                      static_cast<unsigned long long>(stats.axis_chosen[l]),
                      static_cast<unsigned long long>(stats.axis_successes[l]));
        emit(as_json,
             json{{"record", "axis-stats"},
                  {"axis", l + 1},
                  {"chosen", stats.axis_chosen[l]},
                  {"correct", stats.axis_successes[l]}},
             text);
    }

    // Sampled Alice-outcome frequencies against the exact distribution.
    const retroq::JointDistribution dist = retroq::enumerate_outcomes(loaded.protocol);
    for (int j = 0; j < dist.num_outcomes; ++j) {
        double exact = 0.0;
        for (int l = 0; l < dist.num_axes; ++l)
            for (int eta : {1, -1}) exact += dist.joint(l, eta, j);
        const double sampled =
            stats.trials == 0
                ? 0.0
                : static_cast<double>(stats.outcome_counts[static_cast<std::size_t>(j)]) /
                      static_cast<double>(stats.trials);
        char text[120];
        std::snprintf(text, sizeof text, "  outcome %d: exact %.6f, sampled %.6f", j + 1, exact,
                      sampled);
        emit(as_json,
             json{{"record", "outcome-compare"}, {"outcome", j + 1}, {"exact", exact}, {"sampled", sampled}},
             text);
    }

    for (const retroq::TrialRecord& rec : stats.records) {
        json record = {{"record", "trial"},
                       {"axis", rec.chosen_axis + 1},
                       {"bob", rec.bob_outcome},
                       {"alice", rec.alice_outcome + 1},
                       {"retrodictions", rec.retrodictions},
                       {"correct", rec.correct}};
        char text[160];
        std::snprintf(text, sizeof text, "  trial: axis %d bob %+d alice %d %s",
                      rec.chosen_axis + 1, rec.bob_outcome, rec.alice_outcome + 1,
                      rec.correct ? "correct" : "WRONG");
        emit(as_json, record, text);
    }

    const bool perfect = stats.successes == stats.trials;
    return (verdict.passed() && perfect) ? kExitSuccess : kExitDomain;
}

int cmd_circuit_run(const std::string& builtin, const std::string& path, bool as_json) {
    retroq::Circuit circuit;
    std::string name;
    if (!builtin.empty()) {
        const retroq::NetworkProtocolBinding binding = retroq::builtin_network(builtin);
        circuit = binding.full_circuit();
        name = binding.name;
    } else {
        circuit = retroq::parse_circuit(read_file(path));
        name = path;
    }
    const retroq::StateVector out =
        retroq::apply(circuit, retroq::zero_register(circuit.qubit_count));
    emit(as_json,
         json{{"record", "circuit-summary"},
              {"name", name},
              {"qubits", circuit.qubit_count},
              {"gates", circuit.gates.size()}},
         "circuit '" + name + "': " + std::to_string(circuit.gates.size()) + " gates on " +
             std::to_string(circuit.qubit_count) + " qubits");
    for (std::size_t i = 0; i < out.amps.size(); ++i) {
        char text[120];
        std::snprintf(text, sizeof text, "  amp[%zu] = %+.12f %+.12fi", i, out.amps[i].real(),
                      out.amps[i].imag());
        emit(as_json,
             json{{"record", "amplitude"},
                  {"index", i},
                  {"re", out.amps[i].real()},
                  {"im", out.amps[i].imag()}},
             text);
    }
    return kExitSuccess;
}

int cmd_circuit_check(const std::string& builtin, const std::string& path, bool as_json) {
    if (builtin.empty()) {
        // Plain circuit file: grammar check, canonical round trip, unitarity.
        const std::string text = read_file(path);
        const retroq::Circuit circuit = retroq::parse_circuit(text);
        const std::string canonical = retroq::emit_circuit(circuit);
        const retroq::Circuit reparsed = retroq::parse_circuit(canonical);
        const bool round_trip = retroq::emit_circuit(reparsed) == canonical;
        const retroq::StateVector out =
            retroq::apply(circuit, retroq::zero_register(circuit.qubit_count));
        const double norm_drift = std::abs(retroq::norm(out) - 1.0);
        emit(as_json,
             json{{"record", "circuit-check"},
                  {"name", path},
                  {"gates", circuit.gates.size()},
                  {"canonical_round_trip", round_trip},
                  {"norm_drift", norm_drift}},
             "circuit '" + path + "': " + std::to_string(circuit.gates.size()) +
                 " gates, canonical round trip " + (round_trip ? "ok" : "FAILED") +
                 ", norm drift " + std::to_string(norm_drift));
        const bool ok = round_trip && norm_drift <= 1e-12 * (1.0 + static_cast<double>(circuit.gates.size()));
        return ok ? kExitSuccess : kExitDomain;
    }

    const retroq::NetworkProtocolBinding binding = retroq::builtin_network(builtin);
    const retroq::RetrodictionProtocol protocol = retroq::builtin_protocol(binding.protocol_name);
    bool ok = true;

    const retroq::PreparationReport prep = retroq::verify_preparation(binding);
    emit(as_json,
         json{{"record", "prep-check"},
              {"name", binding.name},
              {"overlap", prep.overlap_modulus},
              {"passed", prep.passed}},
         "preparation: overlap " + std::to_string(prep.overlap_modulus) +
             (prep.passed ? " ok" : " FAILED"));
    ok = ok && prep.passed;

    const retroq::MappingReport mapping =
        retroq::verify_measurement_mapping(binding, protocol.measurement.basis);
    for (const retroq::MappingEntry& entry : mapping.entries) {
        char text[160];
        std::snprintf(text, sizeof text,
                      "  outcome %d -> amplitude %d, phase %+.6f%+.6fi, off-mass %.3e%s",
                      entry.outcome, entry.image_index, entry.phase.real(), entry.phase.imag(),
                      entry.off_mass, entry.clean ? "" : " UNCLEAN");
        emit(as_json,
             json{{"record", "mapping"},
                  {"outcome", entry.outcome},
                  {"image_index", entry.image_index},
                  {"phase", {entry.phase.real(), entry.phase.imag()}},
                  {"off_mass", entry.off_mass},
                  {"clean", entry.clean}},
             text);
    }
    emit(as_json,
         json{{"record", "mapping-summary"},
              {"injective", mapping.injective},
              {"all_clean", mapping.all_clean},
              {"passed", mapping.passed()}},
         std::string("measurement mapping: ") + (mapping.passed() ? "bijective" : "FAILED"));
    ok = ok && mapping.passed();

    const retroq::ConsistencyReport consistency = retroq::network_protocol_consistency(binding);
    emit(as_json,
         json{{"record", "consistency"},
              {"network_violations", consistency.network_view.violations.size()},
              {"reference_violations", consistency.reference_view.violations.size()},
              {"agree", consistency.agree}},
         std::string("network/protocol consistency: ") + (consistency.agree ? "agree" : "DISAGREE"));
    ok = ok && consistency.agree && consistency.network_view.passed();

    return ok ? kExitSuccess : kExitDomain;
}

int cmd_construct(const std::string& builtin, const std::string& table_path,
                  const std::string& gram_path, const std::string& axes_path,
                  const std::string& audit, bool as_json) {
    retroq::LookupTable table;
    std::vector<retroq::UnitAxis> axes;
    if (!builtin.empty()) {
        const retroq::RetrodictionProtocol protocol = retroq::builtin_protocol(builtin);
        table = protocol.table;
        axes = protocol.axes;
    } else {
        table = retroq::load_table(read_file(table_path));
        if (!axes_path.empty()) {
            axes = retroq::load_axes(read_file(axes_path));
        } else {
            axes = retroq::axes_from_gram(retroq::load_gram(read_file(gram_path)));
        }
    }
    if (static_cast<int>(axes.size()) != table.num_axes)
        throw std::invalid_argument("construct: axis count does not match the table");

    const retroq::FeasibilityVerdict verdict = retroq::feasibility(axes);
    emit(as_json,
         json{{"record", "feasibility"}, {"feasible", verdict.feasible}, {"reason", verdict.reason}},
         std::string("feasibility: ") + (verdict.feasible ? "feasible" : "infeasible") + " (" +
             verdict.reason + ")");
    if (!verdict.feasible) {
        if (!as_json) std::cout << "no solutions exist for this axis configuration\n";
        return kExitDomain;
    }

    const retroq::AxisGram gram = retroq::AxisGram::from_axes(axes);
    const retroq::CoefficientVector coeff = retroq::solve_coefficients(table, gram);
    for (std::size_t l = 0; l < axes.size(); ++l) {
        char text[140];
        std::snprintf(text, sizeof text, "  axis %zu: (%+.12f, %+.12f, %+.12f)", l + 1, axes[l].x,
                      axes[l].y, axes[l].z);
        emit(as_json,
             json{{"record", "axis"}, {"index", l + 1}, {"n", {axes[l].x, axes[l].y, axes[l].z}}},
             text);
    }
    for (int j = 0; j < coeff.size(); ++j) {
        char text[80];
        std::snprintf(text, sizeof text, "  b[%d] = %.12f", j + 1, coeff.b[static_cast<std::size_t>(j)]);
        emit(as_json, json{{"record", "coefficient"}, {"j", j + 1}, {"b", coeff.b[static_cast<std::size_t>(j)]}},
             text);
    }

    const retroq::ConstraintReport constraints = retroq::check_constraints(table, coeff, axes);
    emit(as_json,
         json{{"record", "constraint-report"},
              {"normalization", constraints.normalization},
              {"signed_sums_squared", constraints.signed_sums_squared},
              {"signed_sums_unsquared", constraints.signed_sums_unsquared},
              {"half_sums", constraints.half_sums},
              {"gram_residuals", constraints.gram_residuals},
              {"worst", constraints.worst_enforced()}},
         "constraint residuals: worst " + std::to_string(constraints.worst_enforced()));

    const retroq::ConstructionResult result = retroq::construct_basis(table, coeff, axes);
    const double ortho =
        retroq::ProjectiveMeasurement(result.basis).orthonormality_residual();
    for (std::size_t j = 0; j < result.basis.size(); ++j) {
        std::string text = "  phi[" + std::to_string(j + 1) + "] =";
        json amps = json::array();
        for (const auto& a : result.basis[j].amps) {
            char buf[64];
            std::snprintf(buf, sizeof buf, " %+.9f%+.9fi", a.real(), a.imag());
            text += buf;
            amps.push_back({a.real(), a.imag()});
        }
        emit(as_json, json{{"record", "basis-row"}, {"j", j + 1}, {"amps", amps}}, text);
    }
    emit(as_json, json{{"record", "construct-summary"}, {"orthonormality", ortho}},
         "constructed basis orthonormality residual " + std::to_string(ortho));

    if (!audit.empty()) print_errata(as_json, retroq::errata_check(audit));
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin retrodiction protocols: verify, simulate, construct, and run gate networks"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable line-delimited records");

    const std::string builtin_help =
        "builtin name: vaa | singlet | m4-symmetric | m3-nonorthogonal";

    auto* verify = app.add_subcommand("verify", "exhaustively check a protocol's table");
    std::string verify_path, verify_builtin;
    double floor = 1e-10, warn_floor = 1e-12;
    verify->add_option("path", verify_path, "protocol file");
    verify->add_option("--builtin", verify_builtin, builtin_help);
    verify->add_option("--floor", floor, "violation floor (default 1e-10)");
    verify->add_option("--warn-floor", warn_floor, "warning floor (default 1e-12)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo retrodiction rounds");
    std::string sim_path, sim_builtin;
    std::uint64_t trials = 1000, seed = kDefaultSeed;
    bool records = false;
    simulate->add_option("path", sim_path, "protocol file");
    simulate->add_option("--builtin", sim_builtin, builtin_help);
    simulate->add_option("-n,--trials", trials, "number of rounds (default 1000)");
    simulate->add_option("--seed", seed, "RNG seed (default 1729, never wall clock)");
    simulate->add_flag("--records", records, "stream every trial record");

    auto* circuit = app.add_subcommand("circuit", "run or check a gate network");
    std::string action, circuit_path, circuit_builtin;
    circuit->add_option("action", action, "run | check")->required();
    circuit->add_option("path", circuit_path, "circuit file");
    circuit->add_option("--builtin", circuit_builtin, "builtin name: vaa-network | singlet-network");

    auto* construct = app.add_subcommand("construct", "solve a table/geometry for a basis");
    std::string con_builtin, con_table, con_gram, con_axes, con_audit;
    construct->add_option("--builtin", con_builtin, builtin_help);
    construct->add_option("--table", con_table, "sign table file ('table K M' header)");
    construct->add_option("--gram", con_gram, "axis gram file ('gram M' header)");
    construct->add_option("--axes", con_axes, "axes file ('axes M' header)");
    construct->add_option("--audit", con_audit,
                          "also audit a builtin's tabulated data (e.g. m4-symmetric)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify) {
            if (verify_path.empty() == verify_builtin.empty())
                throw retroq::ParseError("verify needs exactly one of a path or --builtin");
            return cmd_verify({verify_builtin, verify_path}, floor, warn_floor, as_json);
        }
        if (*simulate) {
            if (sim_path.empty() == sim_builtin.empty())
                throw retroq::ParseError("simulate needs exactly one of a path or --builtin");
            return cmd_simulate({sim_builtin, sim_path}, trials, seed, records, as_json);
        }
        if (*circuit) {
            if (circuit_path.empty() == circuit_builtin.empty())
                throw retroq::ParseError("circuit needs exactly one of a path or --builtin");
            if (action == "run") return cmd_circuit_run(circuit_builtin, circuit_path, as_json);
            if (action == "check") return cmd_circuit_check(circuit_builtin, circuit_path, as_json);
            throw retroq::ParseError("circuit action must be 'run' or 'check'");
        }
        if (*construct) {
            if (con_builtin.empty() && con_table.empty())
                throw retroq::ParseError("construct needs --builtin or --table");
            if (!con_builtin.empty() && !con_table.empty())
                throw retroq::ParseError("construct takes --builtin or --table, not both");
            if (con_builtin.empty() && con_gram.empty() == con_axes.empty())
                throw retroq::ParseError("construct with --table needs exactly one of --gram or --axes");
            return cmd_construct(con_builtin, con_table, con_gram, con_axes, con_audit, as_json);
        }
    } catch (const retroq::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const retroq::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        if (!as_json) std::cout << "no solutions exist for this configuration\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
