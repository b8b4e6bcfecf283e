// Tracks a drifting scalar on a 16-point grid with the QFT diffusion backend
// and the classical convolution side by side.
//
//   qgbf_demo_tracking [steps]

#include <cstdio>
#include <cstdlib>
#include <random>

#include "qgbf/qgbf.hpp"

int main(int argc, char** argv) {
    using namespace qgbf;
    const int steps = argc > 1 ? std::atoi(argv[1]) : 5;

    const auto axis = GridAxis::unsigned_axis(0.0, 1.0, 4);
    const auto noise = discretize_gaussian(noise_axes_for({axis}), {0.0}, {0.8});
    const auto dynamics = DynamicsModel::affine({1.0}, {1.0}, noise);
    const auto sensor = MeasurementModel::gaussian({1.0});

    DiffusionBackend classical, quantum;
    quantum.kind = Backend::Qft;
    quantum.compare_with_classical = false;

    auto pc = discretize_gaussian({axis}, {2.0}, {1.0});
    auto pq = pc;

    // simulated truth and measurements
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n01;
    double truth = 2.0;

    std::printf("step  truth     z      mean(qft)  var(qft)  mean(cls)  TV\n");
    for (int k = 1; k <= steps; ++k) {
        truth += 1.0 + 0.8 * n01(rng);
        const double z = truth + n01(rng);
        const auto sq = gbf_step(pq, dynamics, {}, sensor, StateVec{z}, quantum);
        const auto sc = gbf_step(pc, dynamics, {}, sensor, StateVec{z}, classical);
        pq = sq.posterior;
        pc = sc.posterior;
        std::printf("%4d  %6.2f  %6.2f  %9.4f  %8.4f  %9.4f  %.1e\n", k, truth, z, pq.mean(0), pq.variance(0),
                    pc.mean(0), total_variation(pq.weights(), pc.weights()));
        for (const auto& w : sq.diagnostics.warnings) std::printf("      warning: %s\n", w.c_str());
    }
    return 0;
}
