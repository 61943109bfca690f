#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pir/array_code.hpp"
#include "pir/errors.hpp"
#include "pir/verifier.hpp"

namespace pir {

/// A database of p parts, each a w-bit word (w <= 64).  Cell values are the
/// XOR of the parts in the cell's combination, so recovery is plain GF(2)
/// elimination with word payloads.
struct Database {
    int word_bits = 64;
    std::vector<std::uint64_t> parts;

    int p() const { return static_cast<int>(parts.size()); }

    static std::uint64_t mask_for(int word_bits) {
        return word_bits >= 64 ? ~std::uint64_t{0}
                               : (std::uint64_t{1} << word_bits) - 1;
    }

    static Database random(int p, int word_bits, std::uint64_t seed) {
        if (p < 1) throw DimensionError("database needs at least one part");
        if (word_bits < 1 || word_bits > 64)
            throw UnsupportedParameters("word size must be in [1, 64]");
        std::mt19937_64 rng(seed);
        Database db;
        db.word_bits = word_bits;
        db.parts.resize(p);
        for (auto& part : db.parts) part = rng() & mask_for(word_bits);
        return db;
    }
};

/// One deployed server: the evaluated words of its t cells.
struct ServerState {
    int id = 0; // column index
    std::vector<std::uint64_t> words;

    std::uint64_t get_word(int cell) const {
        if (cell < 0 || cell >= static_cast<int>(words.size()))
            throw IndexError("cell " + std::to_string(cell) + " out of range");
        return words[cell];
    }
};

/// Evaluates every cell of every server against the database.
inline std::vector<ServerState> deploy(const PirArrayCode& code, const Database& db) {
    if (db.p() != code.p())
        throw DimensionError("database has " + std::to_string(db.p()) + " parts, code needs " +
                             std::to_string(code.p()));
    std::vector<ServerState> servers;
    servers.reserve(code.m());
    for (int c = 0; c < code.m(); ++c) {
        ServerState srv;
        srv.id = c;
        srv.words.reserve(code.t());
        for (const BitVec& cell : code.column(c)) {
            std::uint64_t word = 0;
            for (int part : cell.ones()) word ^= db.parts[part];
            srv.words.push_back(word);
        }
        servers.push_back(std::move(srv));
    }
    return servers;
}

/// Reconstructs part x_{part+1} by downloading the cells of one recovery
/// set and eliminating: each fetched word is tracked alongside its
/// combination, and the combination equal to e_part yields the part value.
/// Throws InternalCheckError if the set does not actually span the part
/// (a valid certificate rules this out).
inline std::uint64_t recover_part(const PirArrayCode& code,
                                  const std::vector<ServerState>& servers, int part,
                                  const RecoverySet& set) {
    if (part < 0 || part >= code.p()) throw IndexError("part out of range");
    if (static_cast<int>(servers.size()) != code.m())
        throw DimensionError("server list does not match code");

    // rows in echelon form, each with its accumulated word payload
    std::vector<std::pair<BitVec, std::uint64_t>> rows;
    for (int c : set.cols) {
        code.check_col(c);
        for (int cell = 0; cell < code.t(); ++cell) {
            BitVec vec = code.cell(cell, c);
            std::uint64_t word = servers[c].get_word(cell);
            for (auto& [rvec, rword] : rows)
                if (vec.test(rvec.leading())) {
                    vec ^= rvec;
                    word ^= rword;
                }
            if (!vec.is_zero()) rows.emplace_back(std::move(vec), word);
        }
    }
    BitVec target = BitVec::unit(code.p(), part);
    std::uint64_t value = 0;
    for (auto& [rvec, rword] : rows)
        if (target.test(rvec.leading())) {
            target ^= rvec;
            value ^= rword;
        }
    if (!target.is_zero())
        throw InternalCheckError("recovery set does not span part x_" + std::to_string(part + 1));
    return value;
}

struct EmulationFailure {
    int part = 0;      // 0-based
    int set_index = 0; // index into the part's certificate sets
    std::uint64_t got = 0;
    std::uint64_t want = 0;
};

struct EmulationReport {
    long long recoveries = 0;
    std::vector<EmulationFailure> failures;

    bool ok() const { return failures.empty(); }
};

/// Deploys the database and re-derives every part through every certificate
/// set, comparing against the ground truth.
inline EmulationReport emulate_all(const PirArrayCode& code, const RecoveryCertificate& cert,
                                   const Database& db) {
    auto check = check_certificate(code, cert);
    if (!check.ok)
        throw UnsupportedParameters("refusing to emulate an invalid certificate: " +
                                    check.violation->message);
    auto servers = deploy(code, db);
    EmulationReport report;
    for (int i = 0; i < code.p(); ++i)
        for (std::size_t si = 0; si < cert.parts[i].size(); ++si) {
            std::uint64_t got = recover_part(code, servers, i, cert.parts[i][si]);
            ++report.recoveries;
            if (got != db.parts[i])
                report.failures.push_back(
                    {i, static_cast<int>(si), got, db.parts[i]});
        }
    return report;
}

/// emulate_all over `trials` seeded random databases (seed, seed+1, ...).
inline EmulationReport emulate_trials(const PirArrayCode& code, const RecoveryCertificate& cert,
                                      int trials, std::uint64_t seed, int word_bits = 64) {
    EmulationReport total;
    for (int trial = 0; trial < trials; ++trial) {
        auto report = emulate_all(code, cert, Database::random(code.p(), word_bits, seed + trial));
        total.recoveries += report.recoveries;
        total.failures.insert(total.failures.end(), report.failures.begin(),
                              report.failures.end());
    }
    return total;
}

} // namespace pir
