#include "clwe/harness/acceptance.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"clwe acceptance suite: one PASS/FAIL line per criterion"};
    clwe::harness::AcceptanceOptions opt;
    std::string out = opt.out_dir.string();
    app.add_option("--seed", opt.seed, "master seed");
    app.add_option("--only", opt.only, "criterion ids to run")->check(CLI::Range(1, clwe::harness::kCriterionCount));
    app.add_option("--out", out, "output directory");
    CLI11_PARSE(app, argc, argv);
    opt.out_dir = out;

    const auto results = clwe::harness::run_acceptance(opt, std::cout);
    const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; });
    std::cout << passed << "/" << results.size() << " criteria passed" << std::endl;
    return passed == static_cast<long>(results.size()) ? 0 : 1;
}
