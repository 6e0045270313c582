// SPDX-License-Identifier: Apache-2.0
#include "qll/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "qll/error.hpp"

namespace qll {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::vector<unsigned char>& buf, T x) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &x, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    buf.insert(buf.end(), b, b + sizeof(T));
}

template <class T>
T get(const unsigned char* p) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    T x;
    std::memcpy(&x, b, sizeof(T));
    return x;
}

}  // namespace

int snapshot_entries(FieldKind kind) {
    switch (kind) {
        case FieldKind::scalar: return 1;
        case FieldKind::vector3: return 3;
        case FieldKind::qtensor:
        case FieldKind::matrix: return 9;
    }
    fail(ErrorCode::invalid_argument, "snapshot: unknown field kind");
}

void write_snapshot(const std::string& path, const Field& f, double t) {
    if (f.empty()) fail(ErrorCode::invalid_argument, "write_snapshot: empty field");
    const auto& g = *f.grid();
    const int ne = snapshot_entries(f.kind());
    std::vector<unsigned char> buf;
    buf.reserve(kSnapshotHeaderBytes + 8 * ne * g.npoints());
    put<std::int32_t>(buf, g.dim());
    put<std::int32_t>(buf, g.n());
    put<double>(buf, g.box_length());
    put<std::int32_t>(buf, static_cast<std::int32_t>(f.kind()));
    put<double>(buf, t);
    for (std::size_t p = 0; p < g.npoints(); ++p) {
        switch (f.kind()) {
            case FieldKind::scalar: put<double>(buf, f.comp(0)[p]); break;
            case FieldKind::vector3:
                for (double x : f.vec(p)) put<double>(buf, x);
                break;
            case FieldKind::qtensor:
                for (double x : f.qtensor(p).a) put<double>(buf, x);
                break;
            case FieldKind::matrix:
                for (double x : f.mat(p).a) put<double>(buf, x);
                break;
        }
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorCode::io, "write_snapshot: cannot open " + path);
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!os) fail(ErrorCode::io, "write_snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) fail(ErrorCode::io, "read_snapshot: cannot open " + path);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (buf.size() < kSnapshotHeaderBytes) fail(ErrorCode::io, "read_snapshot: truncated header in " + path);
    const unsigned char* h = buf.data();
    const int dim = get<std::int32_t>(h);
    const int n = get<std::int32_t>(h + 4);
    const double box = get<double>(h + 8);
    const int kind = get<std::int32_t>(h + 16);
    const double t = get<double>(h + 20);
    if (kind < 0 || kind > 3) fail(ErrorCode::io, "read_snapshot: bad kind in " + path);
    const GridPtr g = Grid::create(dim, n, box);
    const FieldKind fk = static_cast<FieldKind>(kind);
    const int ne = snapshot_entries(fk);
    if (buf.size() != kSnapshotHeaderBytes + 8 * ne * g->npoints())
        fail(ErrorCode::io, "read_snapshot: size does not match the header in " + path);
    Snapshot s;
    s.t = t;
    s.field = Field(g, fk);
    const unsigned char* d = h + kSnapshotHeaderBytes;
    for (std::size_t p = 0; p < g->npoints(); ++p) {
        Mat3 m;
        for (int e = 0; e < ne; ++e) m.a[e] = get<double>(d + 8 * (p * ne + e));
        switch (fk) {
            case FieldKind::scalar: s.field.comp(0)[p] = m.a[0]; break;
            case FieldKind::vector3: s.field.set_vec(p, {m.a[0], m.a[1], m.a[2]}); break;
            case FieldKind::qtensor:
                if (!is_qtensor(m)) fail(ErrorCode::io, "read_snapshot: qtensor entry is not symmetric traceless");
                s.field.set_qtensor(p, m);
                break;
            case FieldKind::matrix: s.field.set_mat(p, m); break;
        }
    }
    return s;
}

}  // namespace qll
