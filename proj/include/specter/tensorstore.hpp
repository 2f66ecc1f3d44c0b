#ifndef SPECTER_TENSORSTORE_HPP
#define SPECTER_TENSORSTORE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "specter/bits.hpp"

namespace specter::tensorstore {

enum class DType : std::uint8_t { F32 = 0, F16 = 1 };

inline std::size_t dtype_size(DType t) { return t == DType::F32 ? 4 : 2; }
inline const char* dtype_name(DType t) { return t == DType::F32 ? "f32" : "f16"; }

/// One named dense tensor, raw little-endian element bytes.
struct Tensor {
    std::string name;
    DType dtype = DType::F32;
    std::vector<std::uint32_t> shape;
    Bytes data;

    std::size_t element_count() const;
};

/// Ordered collection of uniquely named tensors; the host medium. File
/// round-trips are byte-identical.
struct TensorStore {
    std::vector<Tensor> tensors;

    /// Throws FormatError on a duplicate name or data/shape mismatch.
    void add(Tensor t);
    std::size_t total_elements() const;
};

/// Wire format: "TSG1" | u32 LE version=1 | u32 LE tensor_count | per tensor:
/// u16 LE name_len, name, u8 dtype, u8 rank, rank x u32 LE dims, raw LE data.
/// No alignment padding; write is canonical.
Bytes write(const TensorStore& store);
TensorStore read(const Bytes& bytes);

TensorStore read_file(const std::string& path);
void write_file(const TensorStore& store, const std::string& path);

/// Headerless little-endian f32 stream, one tensor "w"; for synthetic hosts.
TensorStore read_raw_f32(const Bytes& bytes);
Bytes write_raw_f32(const TensorStore& store);

/// Flattened f64 view of selected tensors in file order, row-major within
/// each tensor; scatter puts edited values back at host precision.
struct FlatView {
    std::vector<double> values;
    struct Segment {
        std::size_t tensor_index;
        std::size_t offset;  // into values
        std::size_t count;
    };
    std::vector<Segment> segments;
};

/// Glob match with '*' and '?'; every other character is literal.
bool glob_match(const std::string& pattern, const std::string& name);

/// Gathers tensors whose names match the glob (empty glob selects all).
/// Throws EmptySelection when nothing matches.
FlatView gather(const TensorStore& store, const std::string& name_glob = "");

/// New store with the view's values rounded back into the selected tensors:
/// f32 and f16 store-back round to nearest-even (f16 with overflow to
/// +-infinity and gradual underflow). Throws ShapeMismatch when the view does
/// not correspond to the store.
TensorStore scatter(const TensorStore& store, const FlatView& view);

}  // namespace specter::tensorstore

#endif
