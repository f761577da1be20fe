#include "pelab/field_io.hpp"

#include "pelab/error.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace pelab {

namespace {

static_assert(std::endian::native == std::endian::little, "field container assumes a little-endian host");

const char kMagic[6] = {'P', 'E', 'L', 'A', 'B', '1'};

void put_i32(std::ofstream& os, std::int32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }

std::int32_t get_i32(std::ifstream& is) {
    std::int32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 4);
    return v;
}

} // namespace

void write_field(const std::string& path, const std::vector<const SField*>& comps) {
    if (comps.empty()) throw PreconditionError("write_field: no components");
    const Grid3& g = comps.front()->grid();
    for (auto* c : comps) require_same_grid(g, c->grid(), "write_field");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("write_field: cannot open " + path);
    os.write(kMagic, 6);
    put_i32(os, g.mode() == Mode::PeriodicChannel ? 0 : 1);
    put_i32(os, g.nx());
    put_i32(os, g.ny());
    put_i32(os, g.nz());
    for (auto* c : comps) os.write(reinterpret_cast<const char*>(c->data()), static_cast<std::streamsize>(c->size() * sizeof(double)));
    if (!os) throw Error("write_field: write failed for " + path);
}

void write_field(const std::string& path, const SField& f) { write_field(path, std::vector<const SField*>{&f}); }
void write_field(const std::string& path, const HField& u) { write_field(path, std::vector<const SField*>{&u[0], &u[1]}); }

std::vector<SField> read_field(const std::string& path, double period) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("read_field: cannot open " + path);
    char magic[6];
    is.read(magic, 6);
    if (!is || std::memcmp(magic, kMagic, 6) != 0) throw Error("read_field: bad magic in " + path);
    const std::int32_t mode = get_i32(is), nx = get_i32(is), ny = get_i32(is), nz = get_i32(is);
    if (!is) throw Error("read_field: truncated header in " + path);
    Grid3 g = mode == 0 ? Grid3::channel(nx, ny, nz, period > 0 ? period : 2.0 * std::numbers::pi) : Grid3::disk(nx, ny, nz);
    is.seekg(0, std::ios::end);
    const auto payload = static_cast<std::size_t>(is.tellg()) - 22;
    const std::size_t per = g.size() * sizeof(double);
    if (per == 0 || payload % per != 0) throw Error("read_field: payload size does not match grid in " + path);
    is.seekg(22);
    std::vector<SField> out;
    for (std::size_t c = 0; c < payload / per; ++c) {
        SField f(g);
        is.read(reinterpret_cast<char*>(f.data()), static_cast<std::streamsize>(per));
        if (!f.all_finite()) throw Error("read_field: non-finite values in " + path);
        out.push_back(std::move(f));
    }
    return out;
}

void write_field_csv(const std::string& path, const std::vector<const SField*>& comps) {
    if (comps.empty()) throw PreconditionError("write_field_csv: no components");
    const Grid3& g = comps.front()->grid();
    std::ofstream os(path);
    if (!os) throw Error("write_field_csv: cannot open " + path);
    os << "x,y,z";
    for (std::size_t c = 0; c < comps.size(); ++c) os << ",v" << c;
    os << '\n' << std::setprecision(17);
    for (std::size_t col = 0; col < g.ncols(); ++col) {
        auto [x, y] = g.column_xy(col);
        for (int k = 0; k < g.nzp(); ++k) {
            os << x << ',' << y << ',' << g.z(k);
            for (auto* f : comps) os << ',' << (*f)[col * g.nzp() + k];
            os << '\n';
        }
    }
}

} // namespace pelab
