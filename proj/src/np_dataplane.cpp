/*
 * (C) Copyright 2026 The pafdsim Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "pafd/np_dataplane.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace pafd::np {

QueueId QueueId::from_flat(std::size_t flat) {
  if (flat >= kQueues) throw std::out_of_range("flat queue id out of range");
  return {static_cast<std::uint8_t>(flat / kQueuesPerPort),
          static_cast<std::uint8_t>(flat % kQueuesPerPort)};
}

QueueId QueueId::make(unsigned port, unsigned queue) {
  if (port >= kPorts) throw std::out_of_range("port must be < 64");
  if (queue >= kQueuesPerPort) throw std::out_of_range("queue must be < 16");
  return {static_cast<std::uint8_t>(port), static_cast<std::uint8_t>(queue)};
}

// ---------------------------------------------------------------------------

DescriptorCache::DescriptorCache() : sram_(kQueues) {}

Descriptor& DescriptorCache::lookup_or_load(QueueId q) {
  const auto tag = q.flat();
  ++clock_;
  for (auto& e : cam_) {
    if (e.valid && e.tag == tag) {
      ++stats_.hits;
      e.last_use = clock_;
      return e.desc;
    }
  }
  ++stats_.misses;

  auto slot = std::find_if(cam_.begin(), cam_.end(), [](const Entry& e) { return !e.valid; });
  if (slot == cam_.end()) {
    slot = std::min_element(cam_.begin(), cam_.end(), [](const Entry& a, const Entry& b) {
      return a.last_use < b.last_use;
    });
    sram_[slot->tag] = slot->desc;
    ++stats_.writebacks;
  }
  slot->valid = true;
  slot->tag = tag;
  slot->last_use = clock_;
  slot->desc = sram_[tag];
  return slot->desc;
}

bool DescriptorCache::is_resident(QueueId q) const {
  return std::any_of(cam_.begin(), cam_.end(),
                     [t = q.flat()](const Entry& e) { return e.valid && e.tag == t; });
}

std::size_t DescriptorCache::resident_count() const {
  return static_cast<std::size_t>(
      std::count_if(cam_.begin(), cam_.end(), [](const Entry& e) { return e.valid; }));
}

std::vector<QueueId> DescriptorCache::residents() const {
  std::vector<QueueId> out;
  for (const auto& e : cam_)
    if (e.valid) out.push_back(QueueId::from_flat(e.tag));
  return out;
}

Descriptor DescriptorCache::peek(QueueId q) const {
  for (const auto& e : cam_)
    if (e.valid && e.tag == q.flat()) return e.desc;
  return sram_[q.flat()];
}

// ---------------------------------------------------------------------------

const char* to_string(TransitionKind k) {
  return k == TransitionKind::BecameNonEmpty ? "BecameNonEmpty" : "BecameEmpty";
}

std::string format_message(const TransitionMessage& m) {
  return "M " + std::to_string(m.seq) + " " + to_string(m.kind) + " " +
         std::to_string(m.queue.port) + " " + std::to_string(m.queue.queue);
}

void MessageRing::push(const TransitionMessage& m) {
  if (q_.size() >= capacity_) throw InvariantViolation("message ring overflow");
  q_.push_back(m);
}

std::optional<TransitionMessage> MessageRing::pop() {
  if (q_.empty()) return std::nullopt;
  auto m = q_.front();
  q_.pop_front();
  return m;
}

std::vector<TransitionMessage> MessageRing::drain() {
  std::vector<TransitionMessage> out(q_.begin(), q_.end());
  q_.clear();
  return out;
}

// ---------------------------------------------------------------------------

QueuePipeline::QueuePipeline() = default;

std::uint32_t QueuePipeline::alloc_node(PacketRef ref) {
  if (!free_nodes_.empty()) {
    const auto idx = free_nodes_.back();
    free_nodes_.pop_back();
    nodes_[idx] = {ref, kNil};
    return idx;
  }
  nodes_.push_back({ref, kNil});
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

void QueuePipeline::emit(QueueId q, TransitionKind kind, std::vector<TransitionMessage>& out) {
  const TransitionMessage m{q, kind, next_seq_++};
  ring_.push(m);
  out.push_back(m);
}

std::vector<TransitionMessage> QueuePipeline::enqueue(QueueId q, PacketRef packet,
                                                      const AdmitHook& admit) {
  std::vector<TransitionMessage> out;
  Descriptor& d = cache_.lookup_or_load(q);
  if (admit && !admit(q, d, packet)) return out;
  if (d.packet_count == kMaxPacketCount)
    throw InvariantViolation("packet_count exceeds 16 bits");

  const auto node = alloc_node(packet);
  if (d.tail == kNil) d.head = node;
  else nodes_[d.tail].next = node;
  d.tail = node;
  if (++d.packet_count == 1) emit(q, TransitionKind::BecameNonEmpty, out);
  return out;
}

std::pair<std::optional<PacketRef>, std::vector<TransitionMessage>> QueuePipeline::dequeue(
    QueueId q) {
  std::vector<TransitionMessage> out;
  Descriptor& d = cache_.lookup_or_load(q);
  if (d.packet_count == 0) return {std::nullopt, out};

  const auto node = d.head;
  const PacketRef ref = nodes_[node].ref;
  d.head = nodes_[node].next;
  if (d.head == kNil) d.tail = kNil;
  free_nodes_.push_back(node);
  if (--d.packet_count == 0) emit(q, TransitionKind::BecameEmpty, out);
  return {ref, out};
}

std::vector<PacketRef> QueuePipeline::contents(QueueId q) const {
  std::vector<PacketRef> out;
  for (auto n = cache_.peek(q).head; n != kNil; n = nodes_[n].next) out.push_back(nodes_[n].ref);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

unsigned parse_uint(std::string_view tok, std::size_t line, const char* what) {
  unsigned v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw TraceParseError(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
  return v;
}

}  // namespace

std::vector<TraceOp> parse_trace(std::string_view text) {
  std::vector<TraceOp> ops;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    const auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;

    TraceOp op;
    op.line = line_no;
    if (tok[0] == "E") {
      if (tok.size() != 4) throw TraceParseError(line_no, "expected 'E <port> <queue> <len>'");
      op.kind = TraceOp::Kind::Enqueue;
      op.length = parse_uint(tok[3], line_no, "length");
      if (op.length == 0) throw TraceParseError(line_no, "length must be positive");
    } else if (tok[0] == "D") {
      if (tok.size() != 3) throw TraceParseError(line_no, "expected 'D <port> <queue>'");
      op.kind = TraceOp::Kind::Dequeue;
    } else {
      throw TraceParseError(line_no, "unknown op '" + std::string(tok[0]) + "'");
    }
    const auto port = parse_uint(tok[1], line_no, "port");
    const auto queue = parse_uint(tok[2], line_no, "queue");
    if (port >= kPorts) throw TraceParseError(line_no, "port must be < 64");
    if (queue >= kQueuesPerPort) throw TraceParseError(line_no, "queue must be < 16");
    op.queue = QueueId::make(port, queue);
    ops.push_back(op);
  }
  return ops;
}

void TransitionChecker::observe(const TransitionMessage& m) {
  if (m.seq <= last_seq_) throw InvariantViolation("message sequence not increasing");
  last_seq_ = m.seq;
  int& b = balance_[m.queue.flat()];
  if (m.kind == TransitionKind::BecameNonEmpty) {
    if (b != 0) throw InvariantViolation("message kinds must alternate per queue");
    b = 1;
  } else {
    if (b != 1) throw InvariantViolation("message kinds must alternate per queue");
    b = 0;
  }
}

ReplayResult replay_trace(const std::vector<TraceOp>& ops) {
  QueuePipeline pipe;
  TransitionChecker checker;
  ReplayResult result;
  std::uint32_t next_handle = 1;

  for (const auto& op : ops) {
    if (op.kind == TraceOp::Kind::Enqueue) pipe.enqueue(op.queue, {next_handle++, op.length});
    else pipe.dequeue(op.queue);

    if (pipe.cache().resident_count() > kCacheEntries)
      throw InvariantViolation("resident descriptors exceed 16");
    for (const auto& m : pipe.ring().drain()) {
      checker.observe(m);
      result.output += format_message(m) + "\n";
      result.messages.push_back(m);
    }
    const int expected = pipe.queue_length(op.queue) > 0 ? 1 : 0;
    if (checker.balance(op.queue) != expected)
      throw InvariantViolation("transition balance does not match queue state");
  }
  return result;
}

}  // namespace pafd::np
