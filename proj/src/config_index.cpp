#include "stablecrd/config_index.hpp"

#include <algorithm>
#include <numeric>

namespace stablecrd {

std::string_view to_string(IndexBackend b) {
    return b == IndexBackend::Naive ? "naive" : "tree";
}

IndexBackend parse_backend(std::string_view name) {
    if (name == "naive") return IndexBackend::Naive;
    if (name == "tree") return IndexBackend::Tree;
    throw PreconditionError("unknown index backend '" + std::string(name) + "'");
}

namespace detail {

namespace {

bool leq_raw(const Count* a, const Count* b, std::size_t dim) {
    for (std::size_t i = 0; i < dim; ++i)
        if (a[i] > b[i]) return false;
    return true;
}

}  // namespace

// Static k-d tree over a fixed point set.
class KdTree {
public:
    static constexpr std::size_t kLeafSize = 8;

    KdTree(std::size_t dim, std::vector<Count> points) : dim_(dim), points_(std::move(points)) {
        std::size_t n = points_.size() / dim_;
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        build(order, 0, n);
        // Lay the points out in tree order so leaves scan contiguous memory.
        std::vector<Count> laid(points_.size());
        for (std::size_t i = 0; i < n; ++i)
            std::copy_n(&points_[order[i] * dim_], dim_, &laid[i * dim_]);
        points_ = std::move(laid);
    }

    std::size_t size() const { return points_.size() / dim_; }
    const std::vector<Count>& points() const { return points_; }

    bool dominates(const Count* q, std::uint64_t& comparisons) const {
        return nodes_.empty() ? false : visit(0, q, comparisons);
    }

private:
    struct Node {
        std::uint32_t begin = 0, end = 0;
        std::int32_t left = -1, right = -1;
        std::uint32_t split_dim = 0;
        Count split = 0;
    };

    std::int32_t build(std::vector<std::uint32_t>& order, std::size_t begin, std::size_t end) {
        auto id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back({static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(end)});
        lower_.resize(nodes_.size() * dim_);

        std::vector<Count> lo(dim_, ~Count{0}), hi(dim_, 0);
        for (std::size_t i = begin; i < end; ++i) {
            const Count* p = &points_[order[i] * dim_];
            for (std::size_t d = 0; d < dim_; ++d) {
                lo[d] = std::min(lo[d], p[d]);
                hi[d] = std::max(hi[d], p[d]);
            }
        }
        std::copy(lo.begin(), lo.end(), lower_.begin() + id * dim_);
        if (end - begin <= kLeafSize) return id;

        std::size_t split_dim = 0;
        for (std::size_t d = 1; d < dim_; ++d)
            if (hi[d] - lo[d] > hi[split_dim] - lo[split_dim]) split_dim = d;
        if (hi[split_dim] == lo[split_dim]) return id;  // all points equal

        std::size_t mid = begin + (end - begin) / 2;
        auto key = [&](std::uint32_t i) { return points_[i * dim_ + split_dim]; };
        std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                         [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });
        Count split = key(order[mid]);

        std::int32_t left = build(order, begin, mid);
        std::int32_t right = build(order, mid, end);
        Node& node = nodes_[id];
        node.left = left;
        node.right = right;
        node.split_dim = static_cast<std::uint32_t>(split_dim);
        node.split = split;
        return id;
    }

    bool visit(std::int32_t id, const Count* q, std::uint64_t& comparisons) const {
        const Node& node = nodes_[id];
        ++comparisons;
        if (!leq_raw(&lower_[id * dim_], q, dim_)) return false;
        if (node.left < 0) {
            for (std::uint32_t i = node.begin; i < node.end; ++i) {
                ++comparisons;
                if (leq_raw(&points_[i * dim_], q, dim_)) return true;
            }
            return false;
        }
        if (visit(node.left, q, comparisons)) return true;
        // Everything on the right has split_dim >= split.
        if (q[node.split_dim] < node.split) return false;
        return visit(node.right, q, comparisons);
    }

    std::size_t dim_;
    std::vector<Count> points_;
    std::vector<Node> nodes_;
    std::vector<Count> lower_;
};

// Logarithmic method over static trees: a small linear buffer plus trees
// whose sizes roughly double from newest to oldest.
class KdForest {
public:
    explicit KdForest(std::size_t dim) : dim_(dim) {}

    void insert(std::span<const Count> point, std::size_t total_size) {
        buffer_.insert(buffer_.end(), point.begin(), point.end());
        std::size_t cap = trees_.empty() ? Antichain::kTreeThreshold : kBufferSize;
        if (buffer_.size() / dim_ < cap || total_size < Antichain::kTreeThreshold) return;

        std::vector<Count> points = std::move(buffer_);
        buffer_.clear();
        while (!trees_.empty() && trees_.back().size() <= points.size() / dim_) {
            const auto& old = trees_.back().points();
            points.insert(points.end(), old.begin(), old.end());
            trees_.pop_back();
        }
        trees_.emplace_back(dim_, std::move(points));
    }

    bool dominates(const Count* q, std::uint64_t& comparisons) const {
        for (std::size_t i = 0; i < buffer_.size(); i += dim_) {
            ++comparisons;
            if (leq_raw(&buffer_[i], q, dim_)) return true;
        }
        for (const KdTree& tree : trees_)
            if (tree.dominates(q, comparisons)) return true;
        return false;
    }

private:
    static constexpr std::size_t kBufferSize = 16;

    std::size_t dim_;
    std::vector<Count> buffer_;
    std::vector<KdTree> trees_;
};

}  // namespace detail

#ifdef NDEBUG
static constexpr bool kCheckedDefault = false;
#else
static constexpr bool kCheckedDefault = true;
#endif

Antichain::Antichain(std::size_t dim, IndexBackend backend)
    : dim_(dim), backend_(backend), checked_(kCheckedDefault) {
    if (backend_ == IndexBackend::Tree) forest_ = std::make_unique<detail::KdForest>(dim_);
}

Antichain::~Antichain() = default;

Antichain::Antichain(const Antichain& other)
    : dim_(other.dim_),
      backend_(other.backend_),
      checked_(other.checked_),
      elements_(other.elements_),
      members_(other.members_),
      forest_(other.forest_ ? std::make_unique<detail::KdForest>(*other.forest_) : nullptr),
      comparisons_(other.comparisons_.load(std::memory_order_relaxed)) {}

Antichain& Antichain::operator=(const Antichain& other) {
    if (this != &other) {
        Antichain copy(other);
        *this = std::move(copy);
    }
    return *this;
}

Antichain::Antichain(Antichain&& other) noexcept
    : dim_(other.dim_),
      backend_(other.backend_),
      checked_(other.checked_),
      elements_(std::move(other.elements_)),
      members_(std::move(other.members_)),
      forest_(std::move(other.forest_)),
      comparisons_(other.comparisons_.load(std::memory_order_relaxed)) {}

Antichain& Antichain::operator=(Antichain&& other) noexcept {
    dim_ = other.dim_;
    backend_ = other.backend_;
    checked_ = other.checked_;
    elements_ = std::move(other.elements_);
    members_ = std::move(other.members_);
    forest_ = std::move(other.forest_);
    comparisons_.store(other.comparisons_.load(std::memory_order_relaxed),
                       std::memory_order_relaxed);
    return *this;
}

bool Antichain::dominates(const Configuration& c) const {
    if (c.dim() != dim_) throw DimensionError("query dimension does not match the antichain");
    std::uint64_t comparisons = 0;
    bool found = false;
    if (backend_ == IndexBackend::Tree) {
        found = forest_->dominates(c.counts().data(), comparisons);
    } else {
        for (const Configuration& u : elements_) {
            ++comparisons;
            if (leq(u, c)) {
                found = true;
                break;
            }
        }
    }
    comparisons_.fetch_add(comparisons, std::memory_order_relaxed);
    return found;
}

void Antichain::insert(Configuration c) {
    if (c.dim() != dim_) throw DimensionError("element dimension does not match the antichain");
    if (members_.count(c)) throw PreconditionError("configuration is already in the antichain");
    if (checked_) {
        for (const Configuration& u : elements_) {
            if (leq(u, c)) throw PreconditionError("inserted configuration is dominated");
            if (leq(c, u))
                throw PreconditionError("inserted configuration dominates a stored one");
        }
    }
    members_.insert(c);
    if (forest_) forest_->insert(c.counts(), elements_.size() + 1);
    elements_.push_back(std::move(c));
}

std::vector<Configuration> Antichain::canonical_list() const {
    std::vector<Configuration> out = elements_;
    sort_canonical(out);
    return out;
}

Antichain prune_to_antichain(std::span<const Configuration> configs, std::size_t dim,
                             IndexBackend backend) {
    // After sorting by size, nothing can be dominated by a later element
    // except its own duplicates, so one pass with dominance queries suffices.
    std::vector<Configuration> sorted(configs.begin(), configs.end());
    sort_canonical(sorted);
    Antichain out(dim, backend);
    for (Configuration& c : sorted) {
        if (c.dim() != dim) throw DimensionError("mixed dimensions in prune_to_antichain");
        if (!out.dominates(c)) out.insert(std::move(c));
    }
    return out;
}

bool is_antichain(std::span<const Configuration> configs) {
    for (std::size_t i = 0; i < configs.size(); ++i)
        for (std::size_t j = 0; j < configs.size(); ++j)
            if (i != j && leq(configs[i], configs[j])) return false;
    return true;
}

}  // namespace stablecrd
