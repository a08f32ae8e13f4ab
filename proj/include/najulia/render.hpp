#pragma once

// Escape-time rendering of the iterated Julia sets J_m over a pixel grid.
// |.| > 2 is tested only at checkpoints M_k (the valid escape certificate),
// plus once immediately when the start stage m is itself a checkpoint.
// Output encoders are deterministic and byte-identical across runs.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "najulia/errors.hpp"
#include "najulia/parallel.hpp"
#include "najulia/seqcore.hpp"

namespace najulia {

struct Region {
    Complex center{0.0, 0.0};
    double width = 6.0;
    double height = 6.0;
};

struct EscapeGrid {
    static constexpr std::int32_t kSurvived = -1;

    Region region;
    std::int64_t nx = 0;
    std::int64_t ny = 0;
    std::int64_t start_stage = 0;
    std::int64_t max_checkpoint = 0;
    std::vector<std::int32_t> cells; // row-major, iy * nx + ix

    std::int32_t at(std::int64_t ix, std::int64_t iy) const {
        return cells[static_cast<std::size_t>(iy * nx + ix)];
    }

    // Pixel centers; offsets are exactly antisymmetric about the region
    // center so conjugation symmetry is exact for real-parameter sequences.
    Complex pixel_center(std::int64_t ix, std::int64_t iy) const {
        const double ox = (static_cast<double>(ix) - static_cast<double>(nx - 1) / 2.0) * (region.width / static_cast<double>(nx));
        const double oy = (static_cast<double>(iy) - static_cast<double>(ny - 1) / 2.0) * (region.height / static_cast<double>(ny));
        return {region.center.real() + ox, region.center.imag() + oy};
    }

    bool cell_of(Complex z, std::int64_t& ix, std::int64_t& iy) const {
        const double dx = region.width / static_cast<double>(nx);
        const double dy = region.height / static_cast<double>(ny);
        const double fx = std::floor((z.real() - region.center.real() + region.width / 2.0) / dx);
        const double fy = std::floor((z.imag() - region.center.imag() + region.height / 2.0) / dy);
        ix = static_cast<std::int64_t>(fx);
        iy = static_cast<std::int64_t>(fy);
        return ix >= 0 && ix < nx && iy >= 0 && iy < ny;
    }
};

namespace detail {

inline std::int32_t classify_pixel(const ParamSpec& spec, Complex z, std::int64_t m, std::int64_t K) {
    std::int64_t k0 = 0;
    if (m > 0 && spec.is_checkpoint(m, k0) && std::abs(z) > 2.0)
        return static_cast<std::int32_t>(k0);
    std::int64_t stage = m;
    for (std::int64_t k = spec.last_checkpoint_index(m) + 1; k <= K; ++k) {
        const Complex c = spec.param(k).c;
        const std::int64_t window_end = spec.checkpoint(k);
        while (stage < window_end) {
            if (std::norm(z) > kMagnitudeCap)
                return static_cast<std::int32_t>(k); // escape certain past the cap
            z = z * z;
            ++stage;
            if (stage == window_end)
                z += c;
        }
        if (!(std::abs(z) <= 2.0))
            return static_cast<std::int32_t>(k);
    }
    return EscapeGrid::kSurvived;
}

} // namespace detail

inline EscapeGrid render_grid(const ParamSpec& spec, Region region, std::int64_t nx, std::int64_t ny,
                              std::int64_t m, std::int64_t K, int threads = 1) {
    if (K < 1 || nx < 1 || ny < 1)
        throw PreconditionError("render_grid needs K >= 1 and resolution >= 1");
    if (!(region.width > 0.0 && region.height > 0.0))
        throw PreconditionError("render region must have positive extent");
    if (m < 0 || m >= spec.checkpoint(K))
        throw PreconditionError("start stage must satisfy 0 <= m < M_K");

    EscapeGrid grid;
    grid.region = region;
    grid.nx = nx;
    grid.ny = ny;
    grid.start_stage = m;
    grid.max_checkpoint = K;
    grid.cells.assign(static_cast<std::size_t>(nx * ny), EscapeGrid::kSurvived);

    parallel_for(ny, threads, [&](std::int64_t row_lo, std::int64_t row_hi) {
        for (std::int64_t iy = row_lo; iy < row_hi; ++iy)
            for (std::int64_t ix = 0; ix < nx; ++ix)
                grid.cells[static_cast<std::size_t>(iy * nx + ix)] =
                    detail::classify_pixel(spec, grid.pixel_center(ix, iy), m, K);
    });
    return grid;
}

// Binary portable graymap: SURVIVED = 0 (black), escape code k mapped
// linearly to 255*k/K. Rows written top to bottom (max imaginary part first).
inline void write_pgm(const EscapeGrid& grid, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f)
        throw IoFailure("cannot open " + path + " for writing");
    std::string header = "P5 " + std::to_string(grid.nx) + " " + std::to_string(grid.ny) + " 255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(grid.nx));
    bool ok = std::fwrite(header.data(), 1, header.size(), f) == header.size();
    for (std::int64_t iy = grid.ny - 1; iy >= 0 && ok; --iy) {
        for (std::int64_t ix = 0; ix < grid.nx; ++ix) {
            const std::int32_t code = grid.at(ix, iy);
            row[static_cast<std::size_t>(ix)] =
                code == EscapeGrid::kSurvived
                    ? 0
                    : static_cast<unsigned char>(std::lround(
                          255.0 * static_cast<double>(code) / static_cast<double>(grid.max_checkpoint)));
        }
        ok = std::fwrite(row.data(), 1, row.size(), f) == row.size();
    }
    std::fclose(f);
    if (!ok)
        throw IoFailure("short write to " + path);
}

// CSV rows "ix,iy,re,im,code"; code -1 marks SURVIVED.
inline void write_escape_csv(const EscapeGrid& grid, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f)
        throw IoFailure("cannot open " + path + " for writing");
    bool ok = std::fputs("ix,iy,re,im,code\n", f) >= 0;
    for (std::int64_t iy = 0; iy < grid.ny && ok; ++iy) {
        for (std::int64_t ix = 0; ix < grid.nx && ok; ++ix) {
            const Complex z = grid.pixel_center(ix, iy);
            ok = std::fprintf(f, "%lld,%lld,%.17g,%.17g,%d\n", static_cast<long long>(ix),
                              static_cast<long long>(iy), z.real(), z.imag(),
                              static_cast<int>(grid.at(ix, iy))) > 0;
        }
    }
    std::fclose(f);
    if (!ok)
        throw IoFailure("short write to " + path);
}

inline void encode_outputs(const EscapeGrid& grid, const std::string& image_path,
                           const std::string& csv_path) {
    write_pgm(grid, image_path);
    write_escape_csv(grid, csv_path);
}

} // namespace najulia
