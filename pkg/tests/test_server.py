import pytest
from fastapi.testclient import TestClient

from flagquiz.server import create_app

TABLE1_TEXTS = [
    ("P1", "I'm pretty sure it is not Antigua and Barbuda."),
    ("P2", "Yeah no way it's Antigua and Barbuda."),
    ("P1", "I would rather go for Christmas Island, what do you think?"),
    ("P2", "Sure, let's go for Christmas Island"),
]


@pytest.fixture()
def client(registry):
    app = create_app(registry=registry)
    with TestClient(app) as client:
        yield client


def create_session(client, **overrides):
    body = {"strategy": "procedural", "threshold": 3, "seed": 5}
    body.update(overrides)
    response = client.post("/sessions", json=body)
    assert response.status_code == 200
    return response.json()


def post_text(client, session_id, speaker, text):
    return client.post(
        f"/sessions/{session_id}/utterances", json={"speaker": speaker, "text": text}
    )


def drive_table1(client, session_id):
    responses = [
        post_text(client, session_id, speaker, text) for speaker, text in TABLE1_TEXTS
    ]
    assert all(r.status_code == 200 for r in responses)
    return responses


def decode_target_code(payload):
    # The flag glyph spells the target country; decode it for scripted wins.
    from flagquiz.registry import glyph_to_code

    return glyph_to_code(payload["question"]["flag"])


class TestSessionLifecycle:
    def test_create_returns_opening_payload(self, client):
        created = create_session(client)
        assert created["session_id"]
        assert "the flag of" in created["utterance"]
        assert len(created["question"]["options"]) == 4
        assert len(created["question"]["flag"]) == 2
        assert created["state"]["phase"] == "listening"
        assert created["state"]["round"] == 0

    def test_same_seed_same_question(self, client):
        a = create_session(client, seed=123)
        b = create_session(client, seed=123)
        assert a["question"] == b["question"]
        assert a["session_id"] != b["session_id"]

    def test_state_endpoint_matches_engine_projection(self, client):
        created = create_session(client)
        sid = created["session_id"]
        posted = post_text(client, sid, "P1", "I think it's France").json()
        fetched = client.get(f"/sessions/{sid}/state").json()
        assert fetched["state"] == posted["state"]
        assert fetched["question"] == posted["question"]

    def test_unknown_session_is_404(self, client):
        assert client.get("/sessions/nope/state").status_code == 404
        assert (
            post_text(client, "nope", "P1", "hello").status_code == 404
        )

    def test_malformed_bodies_are_validation_errors(self, client):
        created = create_session(client)
        sid = created["session_id"]
        response = client.post(f"/sessions/{sid}/utterances", json={"speaker": "P7", "text": "x"})
        assert response.status_code == 422
        response = client.post(f"/sessions/{sid}/utterances", json={"speaker": "P1"})
        assert response.status_code == 422
        response = client.post("/sessions", json={"strategy": "psychic"})
        assert response.status_code == 422
        response = client.post("/sessions", json={"threshold": 0})
        assert response.status_code == 422

    def test_finished_session_rejects_utterances_with_conflict(self, client, registry):
        created = create_session(client, threshold=2)
        sid = created["session_id"]
        for _ in range(3):
            target = decode_target_code(client.get(f"/sessions/{sid}/state").json())
            name = registry.name_of(target)
            post_text(client, sid, "P1", f"I think it's {name}")
            post_text(client, sid, "P2", f"{name}!")
            post_text(client, sid, "P1", "yes")
        state = client.get(f"/sessions/{sid}/state").json()["state"]
        assert state["phase"] == "finished"
        response = post_text(client, sid, "P1", "hello?")
        assert response.status_code == 409


class TestWorkedDialogueOverApi:
    def test_confirmation_after_final_table1_post(self, client):
        created = create_session(client)
        sid = created["session_id"]
        responses = drive_table1(client, sid)
        acts = [
            [action["act"] for action in response.json()["actions"]]
            for response in responses
        ]
        assert acts[:3] == [[], [], []]
        assert acts[3] == ["confirm_answer"]
        assert "final answer?" in responses[3].json()["actions"][0]["text"]

    def test_stream_carries_confirmation_after_posts(self, client):
        created = create_session(client)
        sid = created["session_id"]
        with client.websocket_connect(f"/sessions/{sid}/stream") as socket:
            snapshot = socket.receive_json()
            assert snapshot["type"] == "state"
            assert snapshot["question"]["options"]
            # An out-of-scope greeting first: the agent stays silent.
            post_text(client, sid, "P1", "Hello!")
            drive_table1(client, sid)
            turns = [socket.receive_json() for _ in range(5)]
        assert [t["type"] for t in turns] == ["turn"] * 5
        assert turns[0]["actions"] == []
        confirm = turns[-1]["actions"]
        assert [a["act"] for a in confirm] == ["confirm_answer"]
        assert "final answer?" in confirm[0]["text"]

    def test_stream_for_unknown_session_reports_error(self, client):
        with client.websocket_connect("/sessions/ghost/stream") as socket:
            message = socket.receive_json()
            assert message["type"] == "error"


class TestIsolation:
    def test_two_sessions_never_exchange_events(self, client):
        a = create_session(client, seed=1)
        b = create_session(client, strategy="diarised", seed=2)
        sid_a, sid_b = a["session_id"], b["session_id"]
        with client.websocket_connect(f"/sessions/{sid_a}/stream") as sock_a:
            with client.websocket_connect(f"/sessions/{sid_b}/stream") as sock_b:
                sock_a.receive_json()
                sock_b.receive_json()
                post_text(client, sid_a, "P1", "session A first message")
                post_text(client, sid_b, "P2", "session B first message")
                post_text(client, sid_a, "P2", "session A second message")
                events_a = [sock_a.receive_json() for _ in range(2)]
                events_b = [sock_b.receive_json() for _ in range(1)]
        assert [e["text"] for e in events_a] == [
            "session A first message",
            "session A second message",
        ]
        assert [e["text"] for e in events_b] == ["session B first message"]
        assert {e["session_id"] for e in events_a} == {sid_a}
        assert {e["session_id"] for e in events_b} == {sid_b}

    def test_sessions_expire_after_idle_ttl(self, registry, monkeypatch):
        app = create_app(registry=registry, session_ttl=0.0)
        with TestClient(app) as client:
            created = create_session(client)
            sid = created["session_id"]
            import time

            time.sleep(0.01)
            assert client.get(f"/sessions/{sid}/state").status_code == 404


def test_game_logs_append_to_the_log_directory(registry, tmp_path):
    app = create_app(registry=registry, log_dir=tmp_path)
    with TestClient(app) as client:
        created = create_session(client)
        sid = created["session_id"]
        post_text(client, sid, "P1", "I think it's France")
    log_file = tmp_path / f"{sid}.jsonl"
    assert log_file.exists()
    lines = log_file.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 2  # opening event plus one turn


class TestServerSideNoise:
    def test_full_confusion_swaps_labels_for_diarised(self, client):
        created = create_session(client, strategy="diarised", p_confusion=1.0, seed=3)
        sid = created["session_id"]
        # P1 says it twice; with every label flipped the engine sees two
        # different speakers and detects agreement.
        post_text(client, sid, "P1", "Christmas Island")
        first = post_text(client, sid, "P1", "Christmas Island").json()
        acts = [a["act"] for a in first["actions"]]
        assert acts == []  # both observed as P2: still one speaker
        second = post_text(client, sid, "P2", "Christmas Island").json()
        acts = [a["act"] for a in second["actions"]]
        assert acts == ["confirm_answer"]
