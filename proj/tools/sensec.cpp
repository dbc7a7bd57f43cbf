// Operator entry points: CA lifecycle, node provisioning, scenario
// execution, and microbenchmarks.
//
// Exit codes: 0 success, 1 scenario safety failure, 2 usage error,
// 3 I/O error.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sensec/keydist.hpp"
#include "sensec/netsim.hpp"
#include "sensec/scenario.hpp"
#include "sensec/secmsg.hpp"

namespace {

constexpr int EXIT_SAFETY = 1;
constexpr int EXIT_USAGE = 2;
constexpr int EXIT_IO = 3;

std::array<std::uint8_t, 32> parse_seed_hex(const std::string& hex) {
    if (hex.empty() || hex.size() > 64 || hex.size() % 2 != 0)
        throw sensec::ConfigInvalid("seed must be 2..64 hex digits");
    std::array<std::uint8_t, 32> seed{};
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int v = 0;
        for (int k = 0; k < 2; ++k) {
            const char c = hex[i + static_cast<std::size_t>(k)];
            int nibble;
            if (c >= '0' && c <= '9') nibble = c - '0';
            else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
            else throw sensec::ConfigInvalid("seed must be hex");
            v = v * 16 + nibble;
        }
        seed[i / 2] = static_cast<std::uint8_t>(v);
    }
    return seed;
}

int cmd_ca_init(int degree, const std::string& seed_hex, const std::string& out_path) {
    std::array<std::uint8_t, 32> seed{};
    try {
        seed = parse_seed_hex(seed_hex);
    } catch (const sensec::ConfigInvalid& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_USAGE;
    }
    std::optional<sensec::keydist::MasterPolynomial> master;
    try {
        master.emplace(sensec::keydist::MasterPolynomial::generate(degree, seed));
    } catch (const sensec::DegreeOutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_USAGE;
    }
    const auto bytes = sensec::keydist::serialize_master(*master);
    try {
        sensec::keydist::write_file(out_path, bytes);
    } catch (const sensec::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_IO;
    }
    std::cout << "degree: " << degree << "\n";
    std::cout << "coefficient bytes: " << (degree + 1) * (degree + 1) * 10 << "\n";
    std::cout << "file size: " << bytes.size() << "\n";
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_ca_provision(const std::string& master_path, unsigned id, const std::string& out_path) {
    std::optional<sensec::keydist::MasterPolynomial> master;
    try {
        master.emplace(sensec::keydist::parse_master(sensec::keydist::read_file(master_path)));
    } catch (const sensec::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_IO;
    }
    sensec::keydist::NodeShare share;
    try {
        share = master->derive_share(sensec::gf80::make_node_id(id));
    } catch (const sensec::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_USAGE;
    }
    const auto share_bytes = sensec::keydist::serialize_share(share);
    try {
        sensec::keydist::write_file(out_path, share_bytes);
        // persist the issued-id registry
        sensec::keydist::write_file(master_path, sensec::keydist::serialize_master(*master));
    } catch (const sensec::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_IO;
    }
    std::cout << "id: " << id << "\n";
    std::cout << "coefficient payload: " << share.coeffs.size() * 10 << " bytes\n";
    std::cout << "file size: " << share_bytes.size() << "\n";
    std::cout << "issued ids: " << master->issued_ids().size() << "\n";
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_sim_run(const std::string& config_path, const std::vector<std::uint64_t>& seed_override,
                const std::string& report_path) {
    sensec::netsim::SimConfig config;
    try {
        config = sensec::scenario::load_scenario_file(config_path);
    } catch (const sensec::ConfigInvalid& e) {
        std::cerr << "error: " << config_path << ": " << e.what() << "\n";
        return EXIT_USAGE;
    } catch (const sensec::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_IO;
    }
    if (!seed_override.empty()) config.seed = seed_override.back();

    sensec::netsim::ScenarioReport report;
    try {
        report = sensec::netsim::sim_run(config);
    } catch (const sensec::ConfigInvalid& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_USAGE;
    }

    const std::string text = report.to_text();
    if (!report_path.empty()) {
        try {
            sensec::keydist::write_file(
                report_path, std::span<const std::uint8_t>(
                                 reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
        } catch (const sensec::IoError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return EXIT_IO;
        }
    }

    std::cout << "frames_sent: " << report.counters.frames_sent << "\n";
    std::cout << "frames_delivered: " << report.counters.frames_delivered << "\n";
    std::cout << "key_exchanges: " << report.counters.key_exchanges << "\n";
    std::cout << "replays_rejected: " << report.counters.replays_rejected << "\n";
    std::cout << "forged_frames_accepted: " << report.adversary.forged_frames_accepted << "\n";
    std::cout << "payloads_recovered: " << report.adversary.payloads_recovered << "\n";
    std::cout << "master_reconstructed: " << (report.adversary.master_reconstructed ? "true" : "false")
              << "\n";
    std::cout << "safety: " << (report.safety_ok ? "ok" : "VIOLATED") << "\n";
    for (const auto& v : report.safety_violations) std::cout << "violation: " << v << "\n";
    if (!report_path.empty()) std::cout << "wrote " << report_path << "\n";
    return report.safety_ok ? 0 : EXIT_SAFETY;
}

int cmd_bench(const std::string& target, std::uint64_t iterations) {
    using clock = std::chrono::steady_clock;
    std::uint64_t sink = 0;
    std::uint64_t bytes_processed = 0;
    double elapsed = 0;

    if (target == "field") {
        sensec::SerpentStream rng(std::uint64_t{0xbe7c4});
        std::vector<sensec::gf80::FieldElement> coeffs;
        for (int i = 0; i <= 20; ++i) coeffs.push_back(rng.uniform_field_element());
        const auto start = clock::now();
        for (std::uint64_t i = 0; i < iterations; ++i) {
            const sensec::gf80::NodeId x{static_cast<std::uint16_t>(1 + (i % 65535))};
            sink += static_cast<std::uint64_t>(sensec::gf80::horner_eval(coeffs, x).v);
        }
        elapsed = std::chrono::duration<double>(clock::now() - start).count();
        bytes_processed = iterations * 10;  // one 80-bit secret per evaluation
        std::cout << "target: field (degree-20 share evaluation)\n";
    } else if (target == "cipher") {
        const sensec::secmsg::Key80 key{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        const sensec::serpent::Serpent cipher(key, 16);
        sensec::serpent::Block block{};
        const auto start = clock::now();
        for (std::uint64_t i = 0; i < iterations; ++i) {
            block = cipher.encrypt(block);
            sink += block[0];
        }
        elapsed = std::chrono::duration<double>(clock::now() - start).count();
        bytes_processed = iterations * sensec::serpent::BLOCK_SIZE;
        std::cout << "target: cipher (16-round block encryption)\n";
    } else {  // seal
        const sensec::secmsg::Key80 key{10, 9, 8, 7, 6, 5, 4, 3, 2, 1};
        const sensec::serpent::Serpent cipher(key, 16);
        std::vector<std::uint8_t> payload(16, 0x42);
        sensec::secmsg::CounterState state;
        const auto start = clock::now();
        for (std::uint64_t i = 0; i < iterations; ++i) {
            if (state.s == 0xffff) state.s = 0;
            const auto frame =
                sensec::secmsg::seal(cipher, sensec::gf80::NodeId{77}, sensec::secmsg::MsgType::DATA,
                                     state, payload);
            sink += frame.mac[0];
        }
        elapsed = std::chrono::duration<double>(clock::now() - start).count();
        bytes_processed = iterations * payload.size();
        std::cout << "target: seal (16-byte payload, encrypt + MAC)\n";
    }

    std::cout << "iterations: " << iterations << "\n";
    std::cout << "elapsed_s: " << elapsed << "\n";
    std::cout << "ops_per_s: " << (elapsed > 0 ? static_cast<double>(iterations) / elapsed : 0)
              << "\n";
    std::cout << "bytes_per_s: "
              << (elapsed > 0 ? static_cast<double>(bytes_processed) / elapsed : 0) << "\n";
    std::cout << "checksum: " << sink << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"80-bit polynomial key predistribution, per-node sending clusters, and a "
                 "deterministic adversarial network simulator"};
    app.require_subcommand(1);

    auto* ca_init = app.add_subcommand("ca-init", "generate a master polynomial file");
    int degree = 20;
    std::string seed_hex;
    std::string out_path;
    ca_init->add_option("--degree", degree, "security degree t")->required();
    ca_init->add_option("--seed", seed_hex, "hex seed (up to 64 digits)")->required();
    ca_init->add_option("--out", out_path, "output master file")->required();

    auto* provision = app.add_subcommand("ca-provision", "derive and record a node share");
    std::string master_path;
    unsigned node_id = 0;
    std::string share_path;
    provision->add_option("--master", master_path, "master polynomial file")->required();
    provision->add_option("--id", node_id, "node identity (1..65535)")->required();
    provision->add_option("--out", share_path, "output share file")->required();

    auto* sim = app.add_subcommand("sim-run", "run a scenario and write its report");
    std::string config_path;
    std::vector<std::uint64_t> seed_override;
    std::string report_path;
    sim->add_option("--config", config_path, "scenario file")->required();
    sim->add_option("--seed", seed_override, "override the scenario seed");
    sim->add_option("--report", report_path, "report output file");

    auto* bench = app.add_subcommand("bench", "informational micro-benchmarks");
    std::string target;
    std::uint64_t iterations = 100000;
    bench->add_option("--target", target, "field | cipher | seal")
        ->required()
        ->check(CLI::IsMember({"field", "cipher", "seal"}));
    bench->add_option("--iterations", iterations, "iteration count")
        ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return EXIT_USAGE;
    }

    if (app.got_subcommand(ca_init)) return cmd_ca_init(degree, seed_hex, out_path);
    if (app.got_subcommand(provision)) return cmd_ca_provision(master_path, node_id, share_path);
    if (app.got_subcommand(sim)) return cmd_sim_run(config_path, seed_override, report_path);
    if (app.got_subcommand(bench)) return cmd_bench(target, iterations);
    return EXIT_USAGE;
}
