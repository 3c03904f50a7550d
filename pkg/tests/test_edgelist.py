import io
import logging

import pytest
from hypothesis import given, settings

from orematch.constructions import h_star
from orematch.edgelist import EdgeListError, dump_hypergraph, parse_hypergraph, read_hypergraph, write_hypergraph

from conftest import small_3graphs


def test_parse_with_comments_and_blank_lines():
    text = "# a comment\n\n5 3\n0 1 2\n# another\n2 3 4\n"
    H = parse_hypergraph(text.splitlines())
    assert (H.n, H.k) == (5, 3)
    assert H.edges == ((0, 1, 2), (2, 3, 4))


def test_duplicate_edges_dropped_with_warning(caplog):
    with caplog.at_level(logging.WARNING):
        H = parse_hypergraph(["4 3", "0 1 2", "2 1 0"])
    assert len(H) == 1
    assert "duplicate" in caplog.text


@pytest.mark.parametrize(
    "lines",
    [
        [],
        ["# only comments"],
        ["5"],
        ["5 3", "0 1"],
        ["5 3", "0 1 9"],
        ["5 3", "0 1 1"],
        ["5 3", "0 1 x"],
        ["2 3"],
    ],
)
def test_malformed_input(lines):
    with pytest.raises(EdgeListError):
        parse_hypergraph(lines)


def test_error_message_has_line_number():
    with pytest.raises(EdgeListError, match="f.txt:3"):
        parse_hypergraph(["# c", "4 3", "0 1"], source="f.txt")


@settings(max_examples=100, deadline=None)
@given(small_3graphs())
def test_round_trip(H):
    buf = io.StringIO()
    dump_hypergraph(H, buf, "round trip\nsecond line")
    assert parse_hypergraph(buf.getvalue().splitlines()) == H


def test_file_round_trip(tmp_path):
    H, _ = h_star(9)
    path = tmp_path / "h.txt"
    write_hypergraph(H, path, "hstar")
    assert path.read_text().startswith("# hstar\n9 3\n")
    assert read_hypergraph(path) == H
