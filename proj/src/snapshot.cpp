#include <cstdio>
#include <cstring>
#include <memory>

#include "qlc/solver.hpp"

namespace qlc {

namespace {

constexpr char kMagic[4] = {'Q', 'L', 'C', 'F'};
constexpr std::uint32_t kVersion = 1;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FileHandle = std::unique_ptr<std::FILE, FileCloser>;

void write_all(std::FILE* f, const void* data, std::size_t bytes) {
    if (std::fwrite(data, 1, bytes, f) != bytes)
        throw std::runtime_error("snapshot write failed");
}

void read_all(std::FILE* f, void* data, std::size_t bytes) {
    if (std::fread(data, 1, bytes, f) != bytes)
        throw std::runtime_error("snapshot read failed (truncated file?)");
}

}  // namespace

void save_snapshot(const std::string& path, const QField& field,
                   const SnapshotMeta& meta) {
    FileHandle f(std::fopen(path.c_str(), "wb"));
    if (!f) throw std::runtime_error("cannot open snapshot for writing: " + path);
    write_all(f.get(), kMagic, 4);
    write_all(f.get(), &kVersion, 4);
    const std::int32_t dims[3] = {field.dims.nx, field.dims.ny, field.dims.nz};
    write_all(f.get(), dims, sizeof dims);
    write_all(f.get(), &field.h, 8);
    write_all(f.get(), &meta.s_plus, 8);
    const std::uint8_t kind = static_cast<std::uint8_t>(meta.kind);
    write_all(f.get(), &kind, 1);
    write_all(f.get(), field.data.data(), field.data.size() * sizeof(double));
}

QField load_snapshot(const std::string& path, SnapshotMeta& meta) {
    FileHandle f(std::fopen(path.c_str(), "rb"));
    if (!f) throw std::runtime_error("cannot open snapshot: " + path);
    char magic[4];
    read_all(f.get(), magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not a field snapshot: " + path);
    std::uint32_t version = 0;
    read_all(f.get(), &version, 4);
    if (version != kVersion) throw std::runtime_error("unsupported snapshot version");

    QField field;
    std::int32_t dims[3];
    read_all(f.get(), dims, sizeof dims);
    field.dims = {dims[0], dims[1], dims[2]};
    if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1 || field.dims.count() > (1 << 24))
        throw std::runtime_error("snapshot dims out of range");
    read_all(f.get(), &field.h, 8);
    read_all(f.get(), &meta.s_plus, 8);
    std::uint8_t kind = 0;
    read_all(f.get(), &kind, 1);
    if (kind > static_cast<std::uint8_t>(DensityKind::ModifiedCutoff))
        throw std::runtime_error("snapshot density kind out of range");
    meta.kind = static_cast<DensityKind>(kind);

    field.data.resize(static_cast<std::size_t>(field.dims.count()) * 5);
    read_all(f.get(), field.data.data(), field.data.size() * sizeof(double));

    // Dirichlet mask is by convention the outer shell.
    field.boundary.assign(field.dims.count(), 0);
    for (int iz = 0; iz < field.dims.nz; ++iz)
        for (int iy = 0; iy < field.dims.ny; ++iy)
            for (int ix = 0; ix < field.dims.nx; ++ix)
                if (field.on_face(ix, iy, iz))
                    field.boundary[field.index(ix, iy, iz)] = 1;
    return field;
}

}  // namespace qlc
