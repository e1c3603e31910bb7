"""Endpoint client behaviour against a stubbed HTTP session."""

import pytest

from amr2sparql.endpoint import (
    EndpointClient, EndpointConfig, HttpError, MalformedResults, Timeout,
)
from amr2sparql.terms import XSD_DATETIME, Iri, typed_literal

import requests


class FakeResponse:
    def __init__(self, status_code=200, payload=None, raw=None):
        self.status_code = status_code
        self._payload = payload
        self._raw = raw

    def json(self):
        if self._payload is None:
            raise ValueError("not json: " + repr(self._raw))
        return self._payload


class FakeSession:
    def __init__(self, responses):
        self.responses = list(responses)
        self.calls = []

    def post(self, url, data=None, headers=None, timeout=None):
        self.calls.append({"url": url, "data": data, "headers": headers,
                           "timeout": timeout})
        item = self.responses.pop(0)
        if isinstance(item, Exception):
            raise item
        return item


CFG = EndpointConfig(url="http://sparql.example/query", timeout=5.0)


def make_client(responses, cfg=CFG):
    sleeps = []
    session = FakeSession(responses)
    client = EndpointClient(cfg, session=session, sleep=sleeps.append)
    return client, session, sleeps


def select_payload(rows):
    return {"head": {"vars": ["a"]}, "results": {"bindings": rows}}


def test_ask_result():
    client, session, _ = make_client([FakeResponse(payload={"boolean": True})])
    assert client.execute("ASK WHERE { ?s ?p ?o. }") is True
    call = session.calls[0]
    assert call["url"] == CFG.url
    assert call["data"] == {"query": "ASK WHERE { ?s ?p ?o. }"}
    assert call["headers"]["Accept"] == "application/sparql-results+json"
    assert call["timeout"] == 5.0


def test_select_empty():
    client, _, _ = make_client([FakeResponse(payload=select_payload([]))])
    assert client.execute("SELECT ?a WHERE { ?a ?p ?o. }") == []


def test_select_cells_normalized():
    rows = [
        {"a": {"type": "uri", "value": "http://www.wikidata.org/entity/Q42574"}},
        {"a": {"type": "literal", "value": "1997-12-19T00:00:00Z",
               "datatype": XSD_DATETIME}},
        {"a": {"type": "literal", "value": "plain"}},
        {"a": {"type": "bnode", "value": "b0"}},
    ]
    client, _, _ = make_client([FakeResponse(payload=select_payload(rows))])
    out = client.execute("SELECT ?a WHERE { ?a ?p ?o. }")
    assert out[0]["a"] == Iri("http://www.wikidata.org/entity/Q42574")
    assert out[1]["a"] == typed_literal("1997-12-19T00:00:00Z", XSD_DATETIME)
    assert out[2]["a"].value == "plain"
    assert out[3]["a"] == Iri("_:b0")


def test_retry_then_success():
    client, session, sleeps = make_client([
        FakeResponse(status_code=429),
        FakeResponse(status_code=503),
        FakeResponse(payload={"boolean": False}),
    ])
    assert client.execute("ASK WHERE {}") is False
    assert len(session.calls) == 3
    assert len(sleeps) == 2
    assert sleeps[0] < sleeps[1]  # exponential backoff


def test_retries_exhausted():
    client, session, _ = make_client([FakeResponse(status_code=429)] * 3)
    with pytest.raises(HttpError) as info:
        client.execute("ASK WHERE {}")
    assert info.value.status == 429
    assert len(session.calls) == 3  # initial try + max_retries


def test_non_retryable_status_fails_fast():
    client, session, _ = make_client([FakeResponse(status_code=400)])
    with pytest.raises(HttpError) as info:
        client.execute("broken")
    assert info.value.status == 400
    assert len(session.calls) == 1


def test_timeout():
    client, _, _ = make_client([requests.Timeout("deadline")])
    with pytest.raises(Timeout):
        client.execute("SELECT ?a WHERE {}")


@pytest.mark.parametrize("payload, raw", [
    (None, "<html>oops</html>"),
    ([1, 2], None),
    ({"boolean": "yes"}, None),
    ({"results": {}}, None),
    ({"results": {"bindings": {"a": 1}}}, None),
    (select_payload([{"a": {"value": "no type"}}]), None),
    (select_payload([{"a": {"type": "wild", "value": "x"}}]), None),
])
def test_malformed_results(payload, raw):
    client, _, _ = make_client([FakeResponse(payload=payload, raw=raw)])
    with pytest.raises(MalformedResults):
        client.execute("SELECT ?a WHERE {}")


def test_min_delay_paces_requests():
    cfg = EndpointConfig(url=CFG.url, min_delay_ms=50)
    client, _, sleeps = make_client(
        [FakeResponse(payload={"boolean": True})] * 2, cfg=cfg)
    client.execute("ASK WHERE {}")
    client.execute("ASK WHERE {}")
    assert sleeps and all(0 < s <= 0.05 for s in sleeps)


def test_config_validation():
    with pytest.raises(ValueError):
        EndpointConfig(url=CFG.url, min_delay_ms=-1)
    with pytest.raises(ValueError):
        EndpointConfig(url=CFG.url, max_retries=-1)
