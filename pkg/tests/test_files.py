import pytest

from vtl import files
from vtl.cayley import default_generators, enumerate_ball
from vtl.domain import from_ball, random_connected, singleton
from vtl.errors import ConfigMismatch, CorruptCache, IOFailure
from vtl.group import HEISENBERG, SOL, Z2


def test_ball_round_trip(tmp_path, group_and_gens):
    G, S = group_and_gens
    ball = enumerate_ball(G, S, 3)
    path = tmp_path / "b.txt"
    files.write_ball_cache(ball, path)
    back = files.read_ball_cache(path, G, S)
    assert back == ball
    again = tmp_path / "c.txt"
    files.write_ball_cache(back, again)
    assert again.read_bytes() == path.read_bytes()


def test_nil_radius_one_cache(tmp_path, nil):
    path = tmp_path / "b.txt"
    files.write_ball_cache(enumerate_ball(*nil, 1), path)
    lines = path.read_text().splitlines()
    assert lines[0] == (
        "ball-cache v1 matrix=1,1,0,1 kind=bundle gens=b:0,1,0;c:1,-1,0;t:0,0,1;tb:1,1,1 radius=1"
    )
    assert len(lines) == 1 + 9
    assert lines[1] == "0 0 0 0"


def test_truncated_record_is_corrupt(tmp_path, nil):
    path = tmp_path / "b.txt"
    files.write_ball_cache(enumerate_ball(*nil, 2), path)
    text = path.read_text()
    path.write_text(text[: len(text) - 3])
    with pytest.raises(CorruptCache):
        files.read_ball_cache(path)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda t: t.replace("ball-cache v1", "ball-cache v2", 1),
        lambda t: t.replace("kind=bundle", "kind=torus", 1),
        lambda t: t.replace("matrix=1,1,0,1", "matrix=1,1,0,2", 1),
        lambda t: t.replace("radius=2", "radius=3", 1),
        lambda t: t.replace("\n0 0 0 0\n", "\n0 0 0 1\n", 1),
        lambda t: "\n".join(t.splitlines()[:1] + t.splitlines()[2:][::-1]) + "\n",
        lambda t: t + "0 0 0 2\n",
        lambda t: t.replace(" radius=", " extra=1 radius=", 1),
        lambda t: "",
    ],
)
def test_bad_caches_rejected(tmp_path, nil, mutate):
    path = tmp_path / "b.txt"
    files.write_ball_cache(enumerate_ball(*nil, 2), path)
    path.write_text(mutate(path.read_text()))
    with pytest.raises(CorruptCache):
        files.read_ball_cache(path)


def test_cache_config_mismatch(tmp_path, sol, nil):
    path = tmp_path / "b.txt"
    files.write_ball_cache(enumerate_ball(*sol, 1), path)
    with pytest.raises(ConfigMismatch):
        files.read_ball_cache(path, *nil)
    from vtl.cayley import custom_generators

    with pytest.raises(ConfigMismatch):
        files.read_ball_cache(path, SOL, custom_generators(SOL, ["a", "b", "t"]))


def test_missing_file(tmp_path):
    with pytest.raises(IOFailure):
        files.read_ball_cache(tmp_path / "nope.txt")


@pytest.mark.parametrize("name", ["z2", "nil", "sol"])
def test_domain_round_trip(tmp_path, name):
    from conftest import GROUPS

    G = GROUPS[name]
    S = default_generators(G)
    for D in (random_connected(G, S, 30, 4, 99), singleton(G, S, 2), from_ball(enumerate_ball(G, S, 2), 2)):
        path = tmp_path / "d.txt"
        files.write_domain(D, path)
        back = files.read_domain(path, G, S)
        assert back == D
        assert back.group.kind is G.kind
        files.write_domain(back, tmp_path / "e.txt")
        assert (tmp_path / "e.txt").read_bytes() == path.read_bytes()


def test_domain_header(tmp_path, z2):
    path = tmp_path / "d.txt"
    files.write_domain(random_connected(*z2, 5, 1, 7), path)
    assert path.read_text().splitlines()[0] == "domain v1 matrix=1,0,0,1 gens=a:1,0,0;b:0,1,0 seed=7 rng=pcg64"
    files.write_domain(singleton(*z2), path)
    assert path.read_text() == "domain v1 matrix=1,0,0,1 gens=a:1,0,0;b:0,1,0 seed=none\n0 0 0 1\n"


@pytest.mark.parametrize(
    "body",
    [
        "0 0 0 0\n",
        "1 0 0 1\n0 0 0 1\n",
        "0 0 0 1\n0 0 0 1\n",
        "0 0 1\n",
        "0 0 0 x\n",
    ],
)
def test_bad_domain_records(tmp_path, body):
    path = tmp_path / "d.txt"
    path.write_text("domain v1 matrix=1,1,0,1 gens=b:0,1,0;c:1,-1,0;t:0,0,1;tb:1,1,1 seed=none\n" + body)
    with pytest.raises(CorruptCache):
        files.read_domain(path)


def test_domain_mismatch(tmp_path, nil):
    path = tmp_path / "d.txt"
    files.write_domain(singleton(*nil), path)
    with pytest.raises(ConfigMismatch):
        files.read_domain(path, Z2, default_generators(Z2))
    assert files.read_domain(path).group == HEISENBERG
