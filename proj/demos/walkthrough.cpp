// End-to-end tour of the library: build a code from each family, verify it
// exhaustively, check the generated certificate, and run the emulator on a
// random database.

#include <iostream>

#include "pir/bounds.hpp"
#include "pir/constructions.hpp"
#include "pir/emulator.hpp"
#include "pir/verifier.hpp"

int main() {
    using namespace pir;

    // Smallest interesting member of the first family: t=2 cells per server,
    // d=1 extra parts, so p=3 parts at storage rate s=3/2.
    auto built = construction1(2, 1);
    std::cout << built.family.label << ": m=" << built.predicted_m
              << " k=" << built.predicted_k << " rate=" << built.rate().str() << "\n";

    // The verifier recomputes k from scratch; it has to agree.
    auto report = exact_k(built.code);
    std::cout << "verified k=" << report.k << (report.exact ? " (exact)" : "") << "\n";

    // The certificate that shipped with the construction passes too.
    auto check = check_certificate(built.code, built.certificate);
    std::cout << "certificate " << (check.ok ? "ok" : "invalid") << "\n";

    // Feed an actual database through the scheme: every recovery set of
    // every part must reproduce the stored word.
    Database db = Database::random(built.code.p(), 64, 42);
    auto servers = deploy(built.code, db);
    auto emu = emulate_all(built.code, built.certificate, db);
    std::cout << "emulated " << emu.recoveries << " recoveries, "
              << emu.failures.size() << " failures\n";
    (void)servers;

    // Where does this sit against the known bounds?
    auto bounds = bound_report(built.family.s, built.family.t);
    std::cout << "g(" << built.family.s.str() << ",2) ";
    if (bounds.tight)
        std::cout << "= " << bounds.best_upper.str() << " (tight)\n";
    else
        std::cout << "in [" << (bounds.best_lower ? bounds.best_lower->str() : "?") << ", "
                  << bounds.best_upper.str() << "]\n";

    // A rational storage rate needs the general family.
    auto general = general_construction_rational(Rational(7, 3), 3);
    std::cout << general.family.label << ": m=" << general.predicted_m
              << " k=" << general.predicted_k << " rate=" << general.rate().str() << "\n";
    return 0;
}
