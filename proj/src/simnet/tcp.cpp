#include "gfcsim/simnet/tcp.hpp"

#include <algorithm>

#include "gfcsim/simnet/rng.hpp"

namespace gfcsim {

TcpStack::Conn* TcpStack::find(ConnId id) {
    auto it = conns_.find(id);
    return it == conns_.end() ? nullptr : it->second.get();
}

const TcpStack::Conn* TcpStack::find(ConnId id) const {
    auto it = conns_.find(id);
    return it == conns_.end() ? nullptr : it->second.get();
}

bool TcpStack::has_connection(const Tuple& local, const Tuple& remote) const {
    return by_key_.count({local, remote}) != 0;
}

std::optional<TcpState> TcpStack::state(ConnId id) const {
    auto* c = find(id);
    if (!c) return std::nullopt;
    return c->state;
}

std::optional<std::pair<Tuple, Tuple>> TcpStack::endpoints(ConnId id) const {
    auto* c = find(id);
    if (!c) return std::nullopt;
    return std::make_pair(c->local, c->remote);
}

void TcpStack::emit(const Conn& c, std::uint8_t flags, std::uint32_t seq, Bytes payload) {
    Segment s;
    s.proto = Proto::tcp;
    s.src = c.local;
    s.dst = c.remote;
    s.flags = flags;
    s.seq = seq;
    s.ack = (flags & tcpflag::ACK) ? c.rcv_nxt : 0;
    s.window = params_.window;
    s.ttl = params_.initial_ttl;
    s.payload = std::move(payload);
    send_(std::move(s));
}

void TcpStack::arm(Conn& c) {
    disarm(c);
    const ConnId id = c.id;
    c.timer = sched_.schedule_in(c.rto, [this, id] { on_timer(id); });
    c.timer_armed = true;
}

void TcpStack::disarm(Conn& c) {
    if (c.timer_armed) sched_.cancel(c.timer);
    c.timer_armed = false;
}

ConnId TcpStack::connect(Tuple local, Tuple remote, TcpCallbacks cb, ConnectOptions opts) {
    if (by_key_.count({local, remote})) {
        throw SimulationError("connect: tuple pair already in use: " + local.str() + " -> " + remote.str());
    }
    auto c = std::make_unique<Conn>();
    c->id = next_id_++;
    c->local = local;
    c->remote = remote;
    c->state = TcpState::syn_sent;
    c->cb = std::move(cb);
    c->syn_retries = opts.syn_retries.value_or(params_.syn_retries);
    c->retries_left = c->syn_retries;
    c->rto = opts.rto_base.value_or(params_.rto_base);
    c->multiplier = opts.backoff_multiplier.value_or(params_.backoff_multiplier);
    c->mss = std::min<std::uint16_t>(params_.mss, opts.mss_override.value_or(params_.mss));
    const ConnId id = c->id;
    Conn& ref = *c;
    by_key_[{local, remote}] = id;
    conns_.emplace(id, std::move(c));
    emit(ref, tcpflag::SYN, 0);
    arm(ref);
    return id;
}

void TcpStack::send(ConnId id, std::span<const std::uint8_t> bytes) {
    auto* c = find(id);
    if (!c || c->fin_pending) return;
    c->stream.insert(c->stream.end(), bytes.begin(), bytes.end());
    pump(*c);
}

void TcpStack::close(ConnId id) {
    auto* c = find(id);
    if (!c) return;
    if (c->state != TcpState::established) {
        remove(id);
        return;
    }
    c->fin_pending = true;
    pump(*c);
}

void TcpStack::abort(ConnId id) { remove(id); }

void TcpStack::remove(ConnId id) {
    auto it = conns_.find(id);
    if (it == conns_.end()) return;
    disarm(*it->second);
    by_key_.erase({it->second->local, it->second->remote});
    conns_.erase(it);
}

void TcpStack::fail(ConnId id, std::string_view reason) {
    auto* c = find(id);
    if (!c) return;
    auto cb = std::move(c->cb.on_failed);
    remove(id);
    if (cb) cb(id, reason);
}

void TcpStack::pump(Conn& c) {
    if (c.state != TcpState::established) return;
    while (c.snd_nxt < c.stream.size()) {
        const std::uint32_t inflight = c.snd_nxt - c.snd_una;
        if (inflight >= c.peer_window) break;
        const std::size_t len = std::min<std::size_t>(
            {c.mss, static_cast<std::size_t>(c.peer_window - inflight), c.stream.size() - c.snd_nxt});
        Bytes chunk(c.stream.begin() + c.snd_nxt, c.stream.begin() + c.snd_nxt + len);
        emit(c, tcpflag::ACK, c.snd_nxt, std::move(chunk));
        c.snd_nxt += static_cast<std::uint32_t>(len);
    }
    if (c.snd_nxt > c.snd_una && !c.timer_armed) arm(c);
    if (c.fin_pending && c.snd_una == c.stream.size()) {
        emit(c, tcpflag::FIN | tcpflag::ACK, c.snd_nxt);
        remove(c.id);
    }
}

void TcpStack::on_timer(ConnId id) {
    auto* c = find(id);
    if (!c) return;
    c->timer_armed = false;
    if (c->state == TcpState::syn_sent) {
        if (c->retries_left <= 0) {
            fail(id, "syn-timeout");
            return;
        }
        --c->retries_left;
        c->rto *= c->multiplier;
        emit(*c, tcpflag::SYN, 0);
        arm(*c);
        return;
    }
    if (c->state == TcpState::established && c->snd_una < c->snd_nxt) {
        if (c->retries_left <= 0) {
            fail(id, "data-timeout");
            return;
        }
        --c->retries_left;
        c->rto *= c->multiplier;
        c->snd_nxt = c->snd_una;
        pump(*c);
    }
}

bool TcpStack::receive(const Segment& seg) {
    if (seg.proto != Proto::tcp) return false;
    if (auto it = by_key_.find({seg.dst, seg.src}); it != by_key_.end()) {
        handle(*find(it->second), seg);
        return true;
    }
    if (!seg.is_syn()) return false;
    auto lit = listeners_.find(seg.dst.port);
    if (lit == listeners_.end()) return false;

    auto c = std::make_unique<Conn>();
    c->id = next_id_++;
    c->local = seg.dst;
    c->remote = seg.src;
    c->state = TcpState::syn_received;
    c->peer_window = seg.window;
    c->mss = params_.mss;
    c->rto = params_.rto_base;
    c->multiplier = params_.backoff_multiplier;
    c->retries_left = params_.data_retries;
    const ConnId id = c->id;
    by_key_[{c->local, c->remote}] = id;
    conns_.emplace(id, std::move(c));
    auto cb = lit->second(id);
    if (auto* conn = find(id)) {
        conn->cb = std::move(cb);
        emit(*conn, tcpflag::SYN | tcpflag::ACK, 0);
        sched_.schedule_in(kSynReceivedTimeout, [this, id] {
            auto* half = find(id);
            if (half && half->state == TcpState::syn_received) fail(id, "handshake-timeout");
        });
    }
    return true;
}

void TcpStack::handle(Conn& conn, const Segment& seg) {
    const ConnId id = conn.id;
    if (seg.has(tcpflag::RST)) {
        fail(id, "reset");
        return;
    }
    if (seg.has(tcpflag::ACK) || seg.has(tcpflag::SYN)) conn.peer_window = seg.window;

    Conn* c = &conn;
    switch (c->state) {
        case TcpState::syn_sent:
            if (!seg.is_synack()) return;
            c->state = TcpState::established;
            disarm(*c);
            c->retries_left = params_.data_retries;
            c->rto = params_.rto_base;
            c->multiplier = params_.backoff_multiplier;
            emit(*c, tcpflag::ACK, 0);
            if (c->cb.on_established) c->cb.on_established(id);
            if ((c = find(id))) pump(*c);
            return;
        case TcpState::syn_received:
            if (seg.is_syn()) {
                emit(*c, tcpflag::SYN | tcpflag::ACK, 0);
                return;
            }
            if (!seg.has(tcpflag::ACK)) return;
            c->state = TcpState::established;
            if (c->cb.on_established) c->cb.on_established(id);
            if (!(c = find(id))) return;
            break;
        case TcpState::established:
            if (seg.is_synack()) {
                emit(*c, tcpflag::ACK, 0);
                return;
            }
            if (seg.is_syn()) return;
            break;
        case TcpState::closed:
        case TcpState::failed:
            return;
    }

    if (seg.has(tcpflag::ACK) && seg.ack > c->snd_una && seg.ack <= c->snd_nxt) {
        c->snd_una = seg.ack;
        c->retries_left = params_.data_retries;
        c->rto = params_.rto_base;
        if (c->snd_una == c->snd_nxt) disarm(*c);
        else arm(*c);
    }
    if (!seg.payload.empty()) {
        if (seg.seq == c->rcv_nxt) {
            c->rcv_nxt += static_cast<std::uint32_t>(seg.payload.size());
            emit(*c, tcpflag::ACK, c->snd_nxt);
            if (c->cb.on_data) c->cb.on_data(id, seg.payload);
            if (!(c = find(id))) return;
        } else {
            emit(*c, tcpflag::ACK, c->snd_nxt);
        }
    }
    if (seg.has(tcpflag::FIN) && seg.seq == c->rcv_nxt) {
        auto cb = std::move(c->cb.on_closed);
        remove(id);
        if (cb) cb(id);
        return;
    }
    pump(*c);
}

}  // namespace gfcsim
