// SPDX-License-Identifier: Apache-2.0
//
// Regenerates tests/fixtures/ber_gap.json: the measured relative gap between
// the closed-form average BER and its defining quadrature on the integer
// parameter grid.  Run from the repository root:
//   ./build/tests/gen_ber_gap_fixture tests/fixtures/ber_gap.json

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "thzrelay/metrics.hpp"

using namespace thzrelay;
using nlohmann::json;

int main(int argc, char** argv) {
    const char* out_path = argc > 1 ? argv[1] : "tests/fixtures/ber_gap.json";
    json grid = json::array();
    for (double alpha : {1.0, 2.0}) {
        for (double mu : {1.0, 2.0, 3.0}) {
            for (double phi : {2.4, 6.7}) {
                for (double g0 : {10.0, 15.0, 20.0, 25.0}) {
                    const auto model = stats::make_identical_model(
                        stats::derive_constants({alpha, mu, 1.0}, {phi, 0.8},
                                                std::pow(10.0, g0 / 10.0)));
                    const auto closed =
                        metrics::average_ber_closed_form(metrics::bpsk(), model);
                    const auto quadr =
                        metrics::average_ber_quadrature(metrics::bpsk(), model);
                    const double gap =
                        std::fabs(closed.value - quadr.value) / quadr.value;
                    grid.push_back({{"alpha", alpha},
                                    {"mu", mu},
                                    {"phi", phi},
                                    {"gamma0_db", g0},
                                    {"closed", closed.value},
                                    {"quadrature", quadr.value},
                                    {"gap_rel", gap}});
                    std::printf("a=%g mu=%g phi=%g g0=%g gap %.3e\n", alpha, mu,
                                phi, g0, gap);
                }
            }
        }
    }
    json fx;
    fx["modulation"] = "bpsk";
    fx["s0"] = 0.8;
    fx["grid"] = grid;
    std::ofstream out(out_path);
    out << fx.dump(1) << "\n";
    std::printf("wrote %s (%zu cells)\n", out_path, grid.size());
    return 0;
}
