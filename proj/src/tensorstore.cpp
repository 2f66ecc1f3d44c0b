#include "specter/tensorstore.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <unordered_set>

#include "specter/errors.hpp"
#include "specter/half.hpp"

namespace specter::tensorstore {

namespace {

constexpr char kMagic[4] = {'T', 'S', 'G', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u16(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(Bytes& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

struct Reader {
    const Bytes& bytes;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > bytes.size()) throw FormatError("tensor store: truncated file");
    }
    std::uint8_t u8() {
        need(1);
        return bytes[pos++];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = std::uint16_t(bytes[pos]) | (std::uint16_t(bytes[pos + 1]) << 8);
        pos += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
};

float le_bytes_to_f32(const std::uint8_t* p) {
    std::uint32_t u = 0;
    std::memcpy(&u, p, 4);
    return std::bit_cast<float>(u);
}

std::uint16_t le_bytes_to_u16(const std::uint8_t* p) {
    return std::uint16_t(p[0]) | (std::uint16_t(p[1]) << 8);
}

}  // namespace

std::size_t Tensor::element_count() const {
    std::size_t n = 1;
    for (std::uint32_t d : shape) {
        if (d != 0 && n > std::numeric_limits<std::size_t>::max() / d)
            throw FormatError("tensor store: element count overflow");
        n *= d;
    }
    return n;
}

void TensorStore::add(Tensor t) {
    for (const Tensor& existing : tensors)
        if (existing.name == t.name) throw FormatError("tensor store: duplicate tensor name '" + t.name + "'");
    if (t.data.size() != t.element_count() * dtype_size(t.dtype))
        throw FormatError("tensor store: data length does not match shape for '" + t.name + "'");
    tensors.push_back(std::move(t));
}

std::size_t TensorStore::total_elements() const {
    std::size_t n = 0;
    for (const Tensor& t : tensors) n += t.element_count();
    return n;
}

Bytes write(const TensorStore& store) {
    Bytes out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(store.tensors.size()));
    for (const Tensor& t : store.tensors) {
        if (t.name.size() > 0xFFFF) throw FormatError("tensor store: name longer than 65535 bytes");
        put_u16(out, static_cast<std::uint16_t>(t.name.size()));
        out.insert(out.end(), t.name.begin(), t.name.end());
        out.push_back(static_cast<std::uint8_t>(t.dtype));
        if (t.shape.size() > 0xFF) throw FormatError("tensor store: rank larger than 255");
        out.push_back(static_cast<std::uint8_t>(t.shape.size()));
        for (std::uint32_t d : t.shape) put_u32(out, d);
        out.insert(out.end(), t.data.begin(), t.data.end());
    }
    return out;
}

TensorStore read(const Bytes& bytes) {
    Reader r{bytes};
    r.need(4);
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("tensor store: bad magic");
    r.pos = 4;
    if (r.u32() != kVersion) throw FormatError("tensor store: unsupported version");
    const std::uint32_t count = r.u32();

    TensorStore store;
    std::unordered_set<std::string> names;
    for (std::uint32_t i = 0; i < count; ++i) {
        Tensor t;
        const std::uint16_t name_len = r.u16();
        r.need(name_len);
        t.name.assign(reinterpret_cast<const char*>(bytes.data() + r.pos), name_len);
        r.pos += name_len;
        const std::uint8_t dt = r.u8();
        if (dt > 1) throw FormatError("tensor store: unknown dtype " + std::to_string(dt));
        t.dtype = static_cast<DType>(dt);
        const std::uint8_t rank = r.u8();
        t.shape.resize(rank);
        for (std::uint8_t d = 0; d < rank; ++d) t.shape[d] = r.u32();
        const std::size_t nbytes = t.element_count() * dtype_size(t.dtype);
        r.need(nbytes);
        t.data.assign(bytes.begin() + r.pos, bytes.begin() + r.pos + nbytes);
        r.pos += nbytes;
        if (!names.insert(t.name).second)
            throw FormatError("tensor store: duplicate tensor name '" + t.name + "'");
        store.tensors.push_back(std::move(t));
    }
    if (r.pos != bytes.size()) throw FormatError("tensor store: trailing bytes after last tensor");
    return store;
}

TensorStore read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".f32") == 0) return read_raw_f32(bytes);
    return read(bytes);
}

void write_file(const TensorStore& store, const std::string& path) {
    const Bytes bytes = (path.size() >= 4 && path.compare(path.size() - 4, 4, ".f32") == 0)
                            ? write_raw_f32(store)
                            : write(store);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("short write to '" + path + "'");
}

TensorStore read_raw_f32(const Bytes& bytes) {
    if (bytes.size() % 4 != 0) throw FormatError("raw f32 stream length not a multiple of 4");
    Tensor t;
    t.name = "w";
    t.dtype = DType::F32;
    t.shape = {static_cast<std::uint32_t>(bytes.size() / 4)};
    t.data = bytes;
    TensorStore store;
    store.add(std::move(t));
    return store;
}

Bytes write_raw_f32(const TensorStore& store) {
    Bytes out;
    for (const Tensor& t : store.tensors) {
        if (t.dtype != DType::F32) throw FormatError("raw f32 stream cannot hold f16 tensors");
        out.insert(out.end(), t.data.begin(), t.data.end());
    }
    return out;
}

bool glob_match(const std::string& pattern, const std::string& name) {
    // Iterative star backtracking.
    std::size_t p = 0, s = 0, star = std::string::npos, mark = 0;
    while (s < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[s])) {
            ++p;
            ++s;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = s;
        } else if (star != std::string::npos) {
            p = star + 1;
            s = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

FlatView gather(const TensorStore& store, const std::string& name_glob) {
    FlatView view;
    for (std::size_t i = 0; i < store.tensors.size(); ++i) {
        const Tensor& t = store.tensors[i];
        if (!name_glob.empty() && !glob_match(name_glob, t.name)) continue;
        const std::size_t count = t.element_count();
        view.segments.push_back({i, view.values.size(), count});
        const std::size_t base = view.values.size();
        view.values.resize(base + count);
        if (t.dtype == DType::F32) {
            for (std::size_t e = 0; e < count; ++e)
                view.values[base + e] = static_cast<double>(le_bytes_to_f32(t.data.data() + 4 * e));
        } else {
            for (std::size_t e = 0; e < count; ++e)
                view.values[base + e] = f16_to_f64(le_bytes_to_u16(t.data.data() + 2 * e));
        }
    }
    if (view.segments.empty()) throw EmptySelection("gather: no tensor matches '" + name_glob + "'");
    return view;
}

TensorStore scatter(const TensorStore& store, const FlatView& view) {
    TensorStore out = store;
    for (const FlatView::Segment& seg : view.segments) {
        if (seg.tensor_index >= out.tensors.size()) throw ShapeMismatch("scatter: segment tensor out of range");
        Tensor& t = out.tensors[seg.tensor_index];
        if (seg.count != t.element_count() || seg.offset + seg.count > view.values.size())
            throw ShapeMismatch("scatter: view does not match tensor '" + t.name + "'");
        if (t.dtype == DType::F32) {
            for (std::size_t e = 0; e < seg.count; ++e) {
                const float f = static_cast<float>(view.values[seg.offset + e]);
                const std::uint32_t u = std::bit_cast<std::uint32_t>(f);
                for (int b = 0; b < 4; ++b) t.data[4 * e + b] = static_cast<std::uint8_t>(u >> (8 * b));
            }
        } else {
            for (std::size_t e = 0; e < seg.count; ++e) {
                const std::uint16_t u = f64_to_f16(view.values[seg.offset + e]);
                t.data[2 * e] = static_cast<std::uint8_t>(u);
                t.data[2 * e + 1] = static_cast<std::uint8_t>(u >> 8);
            }
        }
    }
    return out;
}

}  // namespace specter::tensorstore
