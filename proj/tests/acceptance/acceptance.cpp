#include "checks.hpp"

#include <functional>
#include <iostream>

int main()
{
    using namespace ebeq::checks;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"coefficient reproduction", coefficient_reproduction},
        {"theorem 1 y-free iff k7 = 0", theorem1_y_free},
        {"theorem 2 generalized trace", theorem2_trace},
        {"theorem 3 symmetries of G_e", theorem3_symmetries},
        {"Moebius ODEs", moebius_odes},
        {"numeric witnesses", [] { return numeric_witnesses(20, 20240); }},
        {"group structure", [] { return group_structure(100, 4242); }},
        {"core property suites", [] { return property_suites(200, 9001); }},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.passed) ++failed;
        std::cout << (o.passed ? "PASS" : "FAIL") << " " << ++index << " " << name << ": " << o.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
