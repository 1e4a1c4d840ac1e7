#include <iostream>

#include "cmlocus/checks.hpp"

int main() {
    bool all = true;
    for (const auto& run : cmlocus::all_checks()) {
        cmlocus::CheckResult r = run();
        std::cout << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.name << " (" << r.cases
                  << " cases)\n";
        for (const auto& f : r.failures) std::cout << "    " << f << '\n';
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
