#include "chaos/partitions.hpp"

#include <algorithm>
#include <sstream>

#include "chaos/errors.hpp"

namespace chaos {

namespace {

constexpr int kEnumerationGuard = 12;  // Bell(12) = 4213597

std::vector<int> sorted_ground(const std::vector<std::vector<int>>& blocks) {
  std::vector<int> g;
  for (const auto& b : blocks) g.insert(g.end(), b.begin(), b.end());
  std::sort(g.begin(), g.end());
  return g;
}

void check_slot_subset(int d, const std::vector<int>& i_set, const char* who) {
  for (int j : i_set) {
    if (j < 1 || j > d - 1) throw ValidationError(std::string(who) + ": set must lie in {1,...,d-1}");
  }
  std::vector<int> s = i_set;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw ValidationError(std::string(who) + ": duplicate slot in set");
  }
}

}  // namespace

SetPartition::SetPartition(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ValidationError("SetPartition: no blocks");
  for (auto& b : blocks_) {
    if (b.empty()) throw ValidationError("SetPartition: empty block");
    std::sort(b.begin(), b.end());
  }
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  ground_ = sorted_ground(blocks_);
  for (int e : ground_) {
    if (e < 1) throw ValidationError("SetPartition: elements must be positive");
  }
  if (std::adjacent_find(ground_.begin(), ground_.end()) != ground_.end()) {
    throw ValidationError("SetPartition: blocks are not disjoint");
  }
}

bool SetPartition::refines(const SetPartition& coarser) const {
  if (ground_ != coarser.ground_) throw ValidationError("refines: ground sets differ");
  for (const auto& fine : blocks_) {
    bool inside_some = false;
    for (const auto& big : coarser.blocks_) {
      if (std::includes(big.begin(), big.end(), fine.begin(), fine.end())) {
        inside_some = true;
        break;
      }
    }
    if (!inside_some) return false;
  }
  return true;
}

std::string SetPartition::to_string() const {
  std::ostringstream out;
  out << '{';
  for (std::size_t r = 0; r < blocks_.size(); ++r) {
    if (r) out << '|';
    for (std::size_t i = 0; i < blocks_[r].size(); ++i) {
      if (i) out << ',';
      out << blocks_[r][i];
    }
  }
  out << '}';
  return out.str();
}

SetPartition SetPartition::parse(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') {
    throw ValidationError("SetPartition::parse: expected \"{...}\"");
  }
  s = s.substr(1, s.size() - 2);
  std::vector<std::vector<int>> blocks;
  std::istringstream blocks_in(s);
  std::string block_text;
  while (std::getline(blocks_in, block_text, '|')) {
    std::vector<int> block;
    std::istringstream elems(block_text);
    std::string elem;
    while (std::getline(elems, elem, ',')) {
      if (elem.empty()) throw ValidationError("SetPartition::parse: empty element");
      std::size_t used = 0;
      int value = std::stoi(elem, &used);
      if (used != elem.size()) throw ValidationError("SetPartition::parse: bad element '" + elem + "'");
      block.push_back(value);
    }
    blocks.push_back(std::move(block));
  }
  return SetPartition(std::move(blocks));
}

std::vector<SetPartition> enumerate_partitions(const std::vector<int>& ground) {
  std::vector<int> elems = ground;
  std::sort(elems.begin(), elems.end());
  if (std::adjacent_find(elems.begin(), elems.end()) != elems.end()) {
    throw ValidationError("enumerate_partitions: duplicate elements");
  }
  const int n = static_cast<int>(elems.size());
  if (n < 1) throw ValidationError("enumerate_partitions: empty ground set");
  if (n > kEnumerationGuard) {
    throw CapacityError("enumerate_partitions: |K| > 12 exceeds the enumeration guard");
  }

  std::vector<SetPartition> out;
  std::vector<int> code(n, 0);  // restricted growth string
  while (true) {
    int nblocks = *std::max_element(code.begin(), code.end()) + 1;
    std::vector<std::vector<int>> blocks(nblocks);
    for (int i = 0; i < n; ++i) blocks[code[i]].push_back(elems[i]);
    out.emplace_back(std::move(blocks));

    // next restricted growth string
    int i = n - 1;
    for (; i > 0; --i) {
      int cap = 0;
      for (int p = 0; p < i; ++p) cap = std::max(cap, code[p]);
      if (code[i] <= cap) break;
    }
    if (i == 0) break;
    ++code[i];
    std::fill(code.begin() + i + 1, code.end(), 0);
  }
  return out;
}

std::vector<SetPartition> partitions_of_size(const std::vector<int>& ground, int s) {
  if (s < 1 || s > static_cast<int>(ground.size())) {
    throw ValidationError("partitions_of_size: s out of range");
  }
  std::vector<SetPartition> out;
  for (auto& p : enumerate_partitions(ground)) {
    if (p.size() == s) out.push_back(std::move(p));
  }
  return out;
}

SetPartition singleton_partition(int d) {
  if (d < 1) throw ValidationError("singleton_partition: d must be positive");
  std::vector<std::vector<int>> blocks;
  for (int j = 1; j <= d; ++j) blocks.push_back({j});
  return SetPartition(std::move(blocks));
}

SetPartition partition_jk(int d, int j, int k) {
  if (d < 3) throw ValidationError("partition_jk: requires d >= 3");
  if (j < 1 || j > d - 1 || k < 1 || k > d - 1 || j == k) {
    throw ValidationError("partition_jk: need distinct j,k in {1,...,d-1}");
  }
  std::vector<std::vector<int>> blocks{{k, d}};
  for (int l = 1; l <= d - 1; ++l) {
    if (l != j && l != k) blocks.push_back({l});
  }
  return SetPartition(std::move(blocks));
}

SetPartition partition_Ik(int d, const std::vector<int>& i_set, int k) {
  check_slot_subset(d, i_set, "partition_Ik");
  if (k < 1 || k > d - 1) throw ValidationError("partition_Ik: k out of range");
  if (std::find(i_set.begin(), i_set.end(), k) != i_set.end()) {
    throw ValidationError("partition_Ik: k must not belong to I");
  }
  std::vector<std::vector<int>> blocks{{k, d}};
  for (int l = 1; l <= d - 1; ++l) {
    if (l == k) continue;
    if (std::find(i_set.begin(), i_set.end(), l) != i_set.end()) continue;
    blocks.push_back({l});
  }
  return SetPartition(std::move(blocks));
}

SetPartition partition_PI(int d, const std::vector<int>& i_set) {
  if (i_set.empty()) throw ValidationError("partition_PI: I must be nonempty");
  check_slot_subset(d, i_set, "partition_PI");
  std::vector<int> big = i_set;
  big.push_back(d);
  std::vector<std::vector<int>> blocks{big};
  for (int l = 1; l <= d - 1; ++l) {
    if (std::find(i_set.begin(), i_set.end(), l) == i_set.end()) blocks.push_back({l});
  }
  return SetPartition(std::move(blocks));
}

}  // namespace chaos
