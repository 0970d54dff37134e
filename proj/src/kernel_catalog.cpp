#include "ecm/kernel_catalog.hpp"

#include <set>
#include <stdexcept>

namespace ecm {

unsigned StencilShape::row_streams() const {
  std::set<int> rows;
  for (const auto& o : offsets) rows.insert(o[0]);
  return static_cast<unsigned>(rows.size());
}

const std::vector<KernelSpec>& builtin_kernels() {
  static const std::vector<KernelSpec> kernels = [] {
    auto make = [](std::string name, std::string expression, unsigned loads, unsigned stores,
                   unsigned flops) {
      KernelSpec k;
      k.name = std::move(name);
      k.expression = std::move(expression);
      k.load_streams = loads;
      k.store_streams = stores;
      k.flops_per_iteration = flops;
      return k;
    };
    std::vector<KernelSpec> v;
    v.push_back(make("copy", "a[i] = b[i]", 1, 1, 0));

    KernelSpec daxpy = make("daxpy", "y[i] = a[i]*x + y[i]", 2, 1, 2);
    daxpy.store_hit_streams = 1;  // y is loaded, its store misses nothing
    v.push_back(daxpy);

    KernelSpec dot = make("dot", "sum += a[i]*b[i]", 2, 0, 2);
    dot.reduction_op = "fmla";
    v.push_back(dot);

    v.push_back(make("init", "a[i] = s", 0, 1, 0));
    v.push_back(make("load", "load(a[i])", 1, 0, 0));
    v.push_back(make("triad", "a[i] = b[i] + s*c[i]", 2, 1, 2));

    KernelSpec sum = make("sum", "sum += a[i]", 1, 0, 1);
    sum.reduction_op = "fadd";
    v.push_back(sum);

    v.push_back(make("schoenauer", "a[i] = b[i] + c[i]*d[i]", 3, 1, 2));

    KernelSpec stencil = make(
        "2d5pt", "b[i][j] = c*(a[i][j-1] + a[i][j+1] + a[i-1][j] + a[i+1][j]) + a[i][j]", 5, 1, 4);
    stencil.stencil = StencilShape{{{0, 0}, {0, -1}, {0, 1}, {-1, 0}, {1, 0}}};
    v.push_back(stencil);
    return v;
  }();
  return kernels;
}

const KernelSpec& find_kernel(const std::string& name) {
  for (const auto& k : builtin_kernels()) {
    if (k.name == name) return k;
  }
  std::string known;
  for (const auto& k : builtin_kernels()) {
    if (!known.empty()) known += ", ";
    known += k.name;
  }
  throw std::invalid_argument("unknown kernel '" + name + "' (known: " + known + ")");
}

TrafficProfile traffic(const KernelSpec& k, const MachineModel& m,
                       std::optional<LayerConditionState> lc, unsigned unroll_ways) {
  validate(m);
  if (lc && !k.stencil) {
    throw std::invalid_argument("kernel '" + k.name +
                                "' is not a stencil; layer condition state does not apply");
  }
  if (k.reduction_op && k.load_streams == 0) {
    throw std::invalid_argument("kernel '" + k.name + "': a reduction needs a load stream");
  }

  const double stream_bytes = m.bytes_per_vector();  // per stream per VL
  TrafficProfile t;
  t.work_unit = "VL";
  t.core_load_cycles = k.load_streams * stream_bytes / m.l1_load_bw;
  t.core_store_cycles = k.store_streams * stream_bytes / m.l1_store_bw;

  const unsigned write_allocates = k.store_streams - k.store_hit_streams;
  if (!k.stencil) {
    const double rd = (k.load_streams + write_allocates) * stream_bytes;
    t.l1l2_read_bytes = rd;
    t.mem_read_bytes = rd;
  } else {
    // With the layer condition satisfied at a level, all but the leading
    // input row are reused within that level and only one stream crosses
    // it; a violated condition re-fetches every row stream.
    const unsigned rows = k.stencil->row_streams();
    const auto state = lc.value_or(LayerConditionState::satisfied_l1);
    const unsigned l2_streams = state == LayerConditionState::satisfied_l1 ? 1 : rows;
    const unsigned mem_streams = state == LayerConditionState::violated_l2 ? rows : 1;
    t.l1l2_read_bytes = (l2_streams + write_allocates) * stream_bytes;
    t.mem_read_bytes = (mem_streams + write_allocates) * stream_bytes;
  }
  t.l1l2_write_bytes = k.store_streams * stream_bytes;
  t.mem_write_bytes = k.store_streams * stream_bytes;
  t.readonly = k.store_streams == 0;

  if (k.reduction_op) {
    const auto& op = lookup_instruction(m, *k.reduction_op);
    if (!op.latency) {
      throw std::invalid_argument("instruction form '" + op.form +
                                  "' has no latency; cannot bound the reduction chain");
    }
    const unsigned ways = unroll_ways ? unroll_ways : m.vector_length_doubles;
    // MVE over at least VL accumulators is taken to hide the chain latency
    // completely; below that the split chain bounds the iteration rate.
    if (ways < m.vector_length_doubles) {
      t.dependency_chain_cycles = dependency_bound(*op.latency, ways);
    }
  }
  return t;
}

bool evaluate_layer_condition(std::uint64_t inner_dim, unsigned element_bytes,
                              std::uint64_t cache_capacity) {
  if (inner_dim == 0) throw std::invalid_argument("layer condition: inner_dim must be positive");
  // 3 rows * inner_dim * element_bytes within half the capacity.
  return 6 * inner_dim * element_bytes <= cache_capacity;
}

std::optional<LayerConditionState> parse_layer_condition(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text == "satisfied") return LayerConditionState::satisfied_l1;
  if (text == "violated-l1") return LayerConditionState::violated_l1_satisfied_l2;
  if (text == "violated") return LayerConditionState::violated_l2;
  throw std::invalid_argument("unknown layer condition '" + text +
                              "' (known: satisfied, violated-l1, violated)");
}

std::string to_string(LayerConditionState lc) {
  switch (lc) {
    case LayerConditionState::satisfied_l1: return "satisfied";
    case LayerConditionState::violated_l1_satisfied_l2: return "violated-l1";
    case LayerConditionState::violated_l2: return "violated";
  }
  return "?";
}

}  // namespace ecm
