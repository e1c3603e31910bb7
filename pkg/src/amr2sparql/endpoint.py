"""HTTP SPARQL endpoint client.

Issues rendered queries over the SPARQL protocol and normalizes JSON
results into the same term model the local store produces, so result
sets from either execution path compare directly.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass

import requests

from .terms import XSD_STRING, Iri, typed_literal


class EndpointError(Exception):
    pass


class HttpError(EndpointError):
    def __init__(self, status):
        self.status = status
        super().__init__(f"endpoint returned HTTP {status}")


class Timeout(EndpointError):
    pass


class MalformedResults(EndpointError):
    pass


@dataclass
class EndpointConfig:
    url: str
    timeout: float = 30.0
    max_retries: int = 2
    min_delay_ms: int = 0
    user_agent: str = "amr2sparql/0.1 (library client)"

    def __post_init__(self):
        if self.min_delay_ms < 0:
            raise ValueError("min_delay_ms must be >= 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


_RETRYABLE = {429, 500, 502, 503, 504}


class EndpointClient:
    """One endpoint handle; requests are serialized and rate-limited."""

    def __init__(self, cfg, session=None, sleep=time.sleep):
        self.cfg = cfg
        self.session = session or requests.Session()
        self._sleep = sleep
        self._lock = threading.Lock()
        self._last_request = 0.0

    def execute(self, query_text):
        """Run a query; returns a bool for ASK, else a list of binding rows."""
        with self._lock:
            payload = self._request(query_text)
        return _parse_results(payload)

    def _request(self, query_text):
        attempt = 0
        while True:
            self._pace()
            try:
                response = self.session.post(
                    self.cfg.url,
                    data={"query": query_text},
                    headers={
                        "Accept": "application/sparql-results+json",
                        "User-Agent": self.cfg.user_agent,
                    },
                    timeout=self.cfg.timeout,
                )
            except requests.Timeout as exc:
                raise Timeout(str(exc)) from exc
            except requests.RequestException as exc:
                raise EndpointError(str(exc)) from exc
            if response.status_code == 200:
                try:
                    return response.json()
                except ValueError as exc:
                    raise MalformedResults("response is not JSON") from exc
            if response.status_code in _RETRYABLE and attempt < self.cfg.max_retries:
                attempt += 1
                self._sleep(min(2.0 ** attempt, 30.0))
                continue
            raise HttpError(response.status_code)

    def _pace(self):
        if self.cfg.min_delay_ms:
            wait = self.cfg.min_delay_ms / 1000.0 - (time.monotonic() - self._last_request)
            if wait > 0:
                self._sleep(wait)
        self._last_request = time.monotonic()


def execute(cfg, query_text):
    """One-shot convenience wrapper around EndpointClient."""
    return EndpointClient(cfg).execute(query_text)


def _parse_results(payload):
    if not isinstance(payload, dict):
        raise MalformedResults("results document must be a JSON object")
    if "boolean" in payload:
        value = payload["boolean"]
        if not isinstance(value, bool):
            raise MalformedResults("ASK result must be a boolean")
        return value
    try:
        bindings = payload["results"]["bindings"]
    except (KeyError, TypeError) as exc:
        raise MalformedResults("missing results.bindings") from exc
    if not isinstance(bindings, list):
        raise MalformedResults("results.bindings must be a list")
    rows = []
    for entry in bindings:
        row = {}
        for var, cell in entry.items():
            row[var] = _parse_cell(cell)
        rows.append(row)
    return rows


def _parse_cell(cell):
    try:
        kind = cell["type"]
        value = cell["value"]
    except (KeyError, TypeError) as exc:
        raise MalformedResults(f"bad binding cell {cell!r}") from exc
    if kind == "uri":
        return Iri(value)
    if kind in ("literal", "typed-literal"):
        datatype = cell.get("datatype", XSD_STRING)
        try:
            return typed_literal(value, datatype)
        except ValueError as exc:
            raise MalformedResults(f"bad literal {value!r}") from exc
    if kind == "bnode":
        return Iri("_:" + value)
    raise MalformedResults(f"unknown binding type {kind!r}")
