// wtree: commit to a predicate diagram, notarize its root, open single
// evaluation paths, and verify openings against the root.
//
// Exit codes: 0 success/accept, 2 reject or invalid certificate, 1 usage or
// structural error. Diagnostics go to stderr, results to stdout.

#include <openssl/rand.h>

#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wtree/certificate.hpp"
#include "wtree/commitment.hpp"
#include "wtree/compilers.hpp"
#include "wtree/obdd.hpp"
#include "wtree/witness.hpp"

namespace {

using nlohmann::json;
using namespace wtree;

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CodecError("cannot open file: " + path);
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, BytesView data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CodecError("cannot write file: " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw CodecError("write failed: " + path);
}

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
    std::size_t start = s.find_first_not_of(" \t");
    return start == std::string::npos ? std::string() : s.substr(start);
}

Digest read_key_hex_file(const std::string& path) {
    Bytes raw = read_file(path);
    std::string hex = trim(std::string(raw.begin(), raw.end()));
    return digest_from_bytes(BytesView(from_hex(hex)));
}

Digest parse_digest_hex(const std::string& hex) {
    return digest_from_bytes(BytesView(from_hex(trim(hex))));
}

struct XSpec {
    std::string hex;
    std::string json_text;
    std::string schema_path;

    InputWord resolve(std::size_t bit_count) const {
        if (!hex.empty()) return InputWord::from_hex(bit_count, trim(hex));
        if (json_text.empty()) throw CodecError("no criterion input given: use --x or --x-json");
        if (schema_path.empty()) {
            throw CodecError("--x-json needs --schema to pack field values");
        }
        Bytes raw = read_file(schema_path);
        CriterionSchema schema =
            CriterionSchema::from_json(json::parse(std::string(raw.begin(), raw.end())));
        if (schema.bit_count() != bit_count) {
            throw CodecError("schema bit count does not match the diagram/witness");
        }
        return schema.pack(json::parse(json_text));
    }
};

void add_x_options(CLI::App* cmd, XSpec& x) {
    cmd->add_option("--x", x.hex, "Criterion input X as hex (ceil(n/8) bytes, MSB-first)");
    cmd->add_option("--x-json", x.json_text, "Criterion input X as schema field values (JSON)");
    cmd->add_option("--schema", x.schema_path, "Criterion schema JSON (needed with --x-json)");
}

int run(int argc, char** argv) {
    CLI::App app{"Blinded commitments to predicate decision diagrams"};
    app.require_subcommand(1);

    // compile
    auto* compile = app.add_subcommand(
        "compile",
        "Compile a predicate spec JSON (types: ageInRange, bankBalanceAtLeast, visitedAnySite, "
        "houseInPoly, dfa, wildcardSet) into a WTD1 diagram and a schema JSON");
    std::string spec_path, diagram_out, schema_out;
    compile->add_option("--spec", spec_path, "Predicate specification JSON file")->required();
    compile->add_option("--out", diagram_out, "Output diagram file (WTD1)")->required();
    compile->add_option("--schema-out", schema_out, "Output criterion schema JSON")->required();
    compile->callback([&] {
        Bytes raw = read_file(spec_path);
        CompiledPredicate compiled =
            compile_predicate(json::parse(std::string(raw.begin(), raw.end())));
        write_file(diagram_out, BytesView(encode_wtd1(compiled.diagram)));
        std::string schema_json = compiled.schema.to_json().dump(2) + "\n";
        write_file(schema_out, BytesView(reinterpret_cast<const std::uint8_t*>(schema_json.data()),
                                         schema_json.size()));
        std::cout << to_hex(BytesView(compiled.schema.schema_id())) << "\n";
    });

    // keygen
    auto* keygen = app.add_subcommand(
        "keygen", "Generate a fresh 32-byte seed (hex to stdout), or derive a public key");
    std::string keygen_out, public_from;
    keygen->add_option("--out", keygen_out, "Also write the hex seed to this file");
    keygen->add_option("--public-from", public_from,
                       "Print the Ed25519 public key of an existing hex key file instead");
    keygen->callback([&] {
        if (!public_from.empty()) {
            std::cout << to_hex(BytesView(ed25519_public_key(read_key_hex_file(public_from))))
                      << "\n";
            return;
        }
        Digest seed;
        if (RAND_bytes(seed.data(), static_cast<int>(seed.size())) != 1) {
            throw std::runtime_error("system RNG failure");
        }
        std::string hex = to_hex(BytesView(seed));
        if (!keygen_out.empty()) {
            std::string line = hex + "\n";
            write_file(keygen_out, BytesView(
                reinterpret_cast<const std::uint8_t*>(line.data()), line.size()));
        }
        std::cout << hex << "\n";
    });

    // commit
    auto* commit_cmd =
        app.add_subcommand("commit", "Commit to a diagram under a seed; prints the root hash");
    std::string commit_diagram, commit_seed_file, commit_out;
    commit_cmd->add_option("--diagram", commit_diagram, "Diagram file (WTD1)")->required();
    commit_cmd->add_option("--seed-file", commit_seed_file, "Hex seed file")
        ->envname("WT_SEED_FILE");
    commit_cmd->add_option("--out", commit_out, "Output commitment file (WTC-TREE1)")->required();
    commit_cmd->callback([&] {
        if (commit_seed_file.empty()) throw CodecError("no seed: use --seed-file or WT_SEED_FILE");
        Qrobdd q = decode_wtd1(BytesView(read_file(commit_diagram)));
        SeedKeys keys = derive_keys(read_key_hex_file(commit_seed_file), q.level_count());
        CommitmentTree tree = commit(q, keys);
        write_file(commit_out, BytesView(encode_wtc_tree1(tree)));
        std::cout << to_hex(BytesView(tree.root_hash())) << "\n";
    });

    // notarize
    auto* notarize = app.add_subcommand(
        "notarize", "Issue a notary certificate binding a root to a schema and subject");
    std::string nz_root, nz_tree, nz_schema, nz_subject, nz_key_file, nz_out;
    std::uint64_t nz_from = 0, nz_to = 0;
    notarize->add_option("--root", nz_root, "Commitment root hash (hex)");
    notarize->add_option("--tree", nz_tree, "Commitment file to take the root from");
    notarize->add_option("--schema", nz_schema, "Criterion schema JSON")->required();
    notarize->add_option("--subject", nz_subject, "Subject pseudonym (32 bytes hex)")->required();
    notarize->add_option("--valid-from", nz_from, "Window start (unix seconds)")->required();
    notarize->add_option("--valid-to", nz_to, "Window end (unix seconds)")->required();
    notarize->add_option("--key-file", nz_key_file, "Notary Ed25519 private key (hex file)")
        ->envname("WT_NOTARY_KEY_FILE");
    notarize->add_option("--out", nz_out, "Output certificate file (WTC1)")->required();
    notarize->callback([&] {
        if (nz_key_file.empty()) {
            throw CodecError("no notary key: use --key-file or WT_NOTARY_KEY_FILE");
        }
        Digest root;
        if (!nz_root.empty()) {
            root = parse_digest_hex(nz_root);
        } else if (!nz_tree.empty()) {
            root = decode_wtc_tree1(BytesView(read_file(nz_tree))).root_hash;
        } else {
            throw CodecError("no root: use --root or --tree");
        }
        Bytes raw = read_file(nz_schema);
        CriterionSchema schema =
            CriterionSchema::from_json(json::parse(std::string(raw.begin(), raw.end())));
        Digest key = read_key_hex_file(nz_key_file);
        Certificate cert =
            issue(root, schema.schema_id(), parse_digest_hex(nz_subject), nz_from, nz_to, key);
        write_file(nz_out, BytesView(encode_wtc1(cert)));
        std::cout << to_hex(BytesView(ed25519_public_key(key))) << "\n";
    });

    // open
    auto* open_cmd = app.add_subcommand(
        "open", "Open a committed diagram at one input X, producing a witness");
    std::string open_diagram, open_tree, open_seed_file, open_out;
    XSpec open_x;
    open_cmd->add_option("--diagram", open_diagram, "Diagram file (WTD1)")->required();
    open_cmd->add_option("--tree", open_tree, "Commitment file (WTC-TREE1)")->required();
    open_cmd->add_option("--seed-file", open_seed_file, "Hex seed file")
        ->envname("WT_SEED_FILE");
    add_x_options(open_cmd, open_x);
    open_cmd->add_option("--out", open_out, "Output witness file (WTW1)")->required();
    open_cmd->callback([&] {
        if (open_seed_file.empty()) throw CodecError("no seed: use --seed-file or WT_SEED_FILE");
        Qrobdd q = decode_wtd1(BytesView(read_file(open_diagram)));
        CommitmentTreeFile file = decode_wtc_tree1(BytesView(read_file(open_tree)));
        CommitmentTree tree = bind_tree_file(file, q);
        SeedKeys keys = derive_keys(read_key_hex_file(open_seed_file), q.level_count());
        if (commit(q, keys).root_hash() != tree.root_hash()) {
            throw CodecError("commitment file does not match the diagram under this seed");
        }
        InputWord x = open_x.resolve(q.level_count());
        Witness w = open(tree, keys, x);
        write_file(open_out, BytesView(encode_wtw1(w)));
        std::cout << to_hex(BytesView(w.payload)) << "\n";
    });

    // verify
    auto* verify_cmd = app.add_subcommand(
        "verify", "Verify a witness against a root hash (and optionally a certificate)");
    std::string vf_root, vf_witness, vf_cert, vf_notary_pub;
    std::uint64_t vf_now = static_cast<std::uint64_t>(std::time(nullptr));
    XSpec vf_x;
    verify_cmd->add_option("--root", vf_root, "Commitment root hash (hex)")->required();
    add_x_options(verify_cmd, vf_x);
    verify_cmd->add_option("--witness", vf_witness, "Witness file (WTW1)")->required();
    verify_cmd->add_option("--cert", vf_cert, "Certificate file (WTC1) to check");
    verify_cmd->add_option("--notary-pub", vf_notary_pub,
                           "Notary Ed25519 public key, hex or @file (needed with --cert)");
    verify_cmd->add_option("--now", vf_now, "Clock for the certificate window check");
    int verify_result = 0;
    verify_cmd->callback([&] {
        Digest root = parse_digest_hex(vf_root);
        bool cert_ok = true;
        if (!vf_cert.empty()) {
            if (vf_notary_pub.empty()) throw CodecError("--cert needs --notary-pub");
            Digest pub = vf_notary_pub.front() == '@'
                             ? read_key_hex_file(vf_notary_pub.substr(1))
                             : parse_digest_hex(vf_notary_pub);
            Certificate cert = decode_wtc1(BytesView(read_file(vf_cert)));
            CertCheck verdict = check(cert, pub, vf_now);
            if (verdict != CertCheck::Valid) {
                std::cerr << "certificate: " << to_string(verdict) << "\n";
                cert_ok = false;
            } else if (cert.root_hash != root) {
                std::cerr << "certificate: bound to a different root\n";
                cert_ok = false;
            } else if (!vf_x.schema_path.empty()) {
                Bytes raw = read_file(vf_x.schema_path);
                CriterionSchema schema = CriterionSchema::from_json(
                    json::parse(std::string(raw.begin(), raw.end())));
                if (cert.schema_id != schema.schema_id()) {
                    std::cerr << "certificate: bound to a different schema\n";
                    cert_ok = false;
                }
            }
        }
        Witness w = decode_wtw1(BytesView(read_file(vf_witness)));
        InputWord x = vf_x.resolve(w.level_count);
        std::optional<Bytes> payload = cert_ok ? verify(root, x, w) : std::nullopt;
        if (payload) {
            std::cout << "ACCEPT " << to_hex(BytesView(*payload)) << "\n";
            verify_result = 0;
        } else {
            std::cout << "REJECT\n";
            verify_result = 2;
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return verify_result;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
