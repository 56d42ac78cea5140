// Writes the reference patterns as pattern documents.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "crease/fixtures.hpp"

int main(int argc, char** argv) {
    CLI::App app{"write the reference crease-rule patterns"};
    std::string dir = "data";
    int n = crease::fixtures::kDefaultSamples;
    app.add_option("dir", dir, "output directory");
    app.add_option("--samples", n, "samples per curve")->check(CLI::Range(33, 1 << 20));
    CLI11_PARSE(app, argc, argv);

    namespace fx = crease::fixtures;
    const std::vector<std::pair<std::string, std::function<crease::CreaseRulePattern(int)>>> all{
        {"annulus", [](int m) { return fx::annulus(m); }},
        {"single-annulus", fx::single_annulus},
        {"sine-cylinder", fx::sine_cylinder},
        {"pleated-sine", fx::pleated_sine},
        {"catenary-pair", [](int m) { return fx::catenary_pair(m); }},
        {"catenary-host", [](int m) { return fx::catenary_host(m); }},
        {"off-center-annulus", fx::off_center},
        {"mismatched-inflection", fx::mismatched_inflection},
        {"straight-pair", fx::straight_pair},
        {"planar-constant-mix", fx::planar_constant_mix},
    };
    std::filesystem::create_directories(dir);
    for (const auto& [name, make] : all) {
        const std::string path = dir + "/" + name + ".json";
        std::ofstream f(path);
        f << crease::to_json(make(n)).dump(1) << "\n";
        if (!f) {
            std::fprintf(stderr, "cannot write %s\n", path.c_str());
            return 2;
        }
        std::printf("%s\n", path.c_str());
    }
    return 0;
}
