"""Framed TCP transport: a dataset-holding server answers query matrices.

Frames are length-prefixed: u32 LE length (= 1 + payload size), one kind
byte, payload. Kinds: 0x01 QUERY (query file bytes), 0x02 ANSWER (answer
file bytes), 0x03 ERROR (u16 code + utf-8 message), 0x04 HELLO (p u64,
m u16, K u32, all LE).

A connection starts with a HELLO exchange: the client announces the
parameters it expects, the server replies with its own if they match or an
ERROR(code 1) if not. After that each QUERY frame is answered with an ANSWER
frame. The server sees only the query matrix and public dims; it is
stateless across requests apart from the read-only dataset.

Error codes: 1 parameter mismatch at HELLO, 2 malformed frame or payload,
3 query/dataset mismatch, 4 internal failure.
"""

import socket
import socketserver
import struct

from .errors import JpltError, Malformed, ParamMismatch
from .formats import decode_answer, decode_query, encode_answer, encode_query
from .protocol import server_answer

KIND_QUERY = 0x01
KIND_ANSWER = 0x02
KIND_ERROR = 0x03
KIND_HELLO = 0x04

_LEN = struct.Struct("<I")
_HELLO = struct.Struct("<QHI")  # p, m, K
_ERR = struct.Struct("<H")

ERR_PARAM_MISMATCH = 1
ERR_MALFORMED = 2
ERR_QUERY_MISMATCH = 3
ERR_INTERNAL = 4

# 64 MiB frame cap; a sanity bound, not a protocol constant
_MAX_FRAME = 64 << 20


def _recv_exact(sock, n):
    buf = bytearray()
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            raise Malformed("connection closed mid-frame")
        buf.extend(chunk)
    return bytes(buf)


def send_frame(sock, kind, payload=b""):
    sock.sendall(_LEN.pack(1 + len(payload)) + bytes([kind]) + payload)


def recv_frame(sock):
    (length,) = _LEN.unpack(_recv_exact(sock, _LEN.size))
    if length < 1 or length > _MAX_FRAME:
        raise Malformed(f"frame length {length} out of range")
    body = _recv_exact(sock, length)
    return body[0], body[1:]


def _hello_payload(p, m, k):
    return _HELLO.pack(p, m, k)


def _parse_hello(payload):
    if len(payload) != _HELLO.size:
        raise Malformed(f"HELLO payload is {len(payload)} bytes")
    return _HELLO.unpack(payload)


def _error_payload(code, message):
    return _ERR.pack(code) + message.encode("utf-8")


def _parse_error(payload):
    if len(payload) < _ERR.size:
        raise Malformed("ERROR payload truncated")
    (code,) = _ERR.unpack_from(payload, 0)
    return code, payload[_ERR.size:].decode("utf-8", errors="replace")


class AnswerServer(socketserver.ThreadingTCPServer):
    """Serves one immutable dataset to any number of concurrent clients."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, dataset, address):
        self.dataset = dataset
        super().__init__(address, _Handler)


class _Handler(socketserver.BaseRequestHandler):
    def handle(self):
        sock = self.request
        data = self.server.dataset
        try:
            kind, payload = recv_frame(sock)
            if kind != KIND_HELLO:
                send_frame(sock, KIND_ERROR,
                           _error_payload(ERR_MALFORMED, "expected HELLO"))
                return
            p, m, k = _parse_hello(payload)
            mine = (data.field.p, data.msg_len, data.num_messages)
            if (p, m, k) != mine:
                send_frame(sock, KIND_ERROR, _error_payload(
                    ERR_PARAM_MISMATCH,
                    f"server holds p={mine[0]} m={mine[1]} K={mine[2]}",
                ))
                return
            send_frame(sock, KIND_HELLO, _hello_payload(*mine))
            while True:
                try:
                    kind, payload = recv_frame(sock)
                except Malformed:
                    return  # client hung up
                if kind != KIND_QUERY:
                    send_frame(sock, KIND_ERROR,
                               _error_payload(ERR_MALFORMED, "expected QUERY"))
                    return
                self._answer(sock, data, payload)
        except OSError:
            return

    def _answer(self, sock, data, payload):
        try:
            query = decode_query(payload)
        except Malformed as exc:
            send_frame(sock, KIND_ERROR, _error_payload(ERR_MALFORMED, str(exc)))
            return
        try:
            ans = server_answer(query, data)
        except ParamMismatch as exc:
            send_frame(sock, KIND_ERROR,
                       _error_payload(ERR_QUERY_MISMATCH, str(exc)))
            return
        except JpltError as exc:
            send_frame(sock, KIND_ERROR, _error_payload(ERR_INTERNAL, str(exc)))
            return
        send_frame(sock, KIND_ANSWER, encode_answer(ans, data.num_messages))


def make_server(dataset, host="127.0.0.1", port=0):
    """Bound but not yet running server; port 0 picks a free one."""
    return AnswerServer(dataset, (host, port))


def serve(dataset, host, port):
    """Run a server until interrupted."""
    with make_server(dataset, host, port) as srv:
        srv.serve_forever()


def _raise_for_error(payload):
    code, message = _parse_error(payload)
    if code in (ERR_PARAM_MISMATCH, ERR_QUERY_MISMATCH):
        raise ParamMismatch(f"server rejected request: {message}")
    if code == ERR_MALFORMED:
        raise Malformed(f"server rejected request: {message}")
    raise JpltError(f"server error {code}: {message}")


def fetch(host, port, query, timeout=10.0):
    """Send one query to a server and return the decoded Answer."""
    with socket.create_connection((host, port), timeout=timeout) as sock:
        send_frame(sock, KIND_HELLO, _hello_payload(
            query.field.p, query.msg_len, query.num_messages))
        kind, payload = recv_frame(sock)
        if kind == KIND_ERROR:
            _raise_for_error(payload)
        if kind != KIND_HELLO:
            raise Malformed(f"expected HELLO reply, got kind {kind}")
        if _parse_hello(payload) != (query.field.p, query.msg_len,
                                     query.num_messages):
            raise ParamMismatch("server announced different parameters")
        send_frame(sock, KIND_QUERY, encode_query(query))
        kind, payload = recv_frame(sock)
        if kind == KIND_ERROR:
            _raise_for_error(payload)
        if kind != KIND_ANSWER:
            raise Malformed(f"expected ANSWER, got kind {kind}")
        return decode_answer(payload)
