"Tests for reading and writing skeleton and label files."

# pylint: disable=C0111,W0621

import io

import numpy as np
import pytest

from skelsign.data import (
    GestureLabel,
    SkeletonSequence,
    parse_skeleton_csv,
    read_labels,
    read_skeleton_file,
    write_labels,
    write_skeleton_csv,
)
from skelsign.data.skeleton import label_for
from skelsign.exceptions import FormatError, LabelingError, ParseError


def csv_text(rows):
    return "\n".join(",".join(str(v) for v in row) for row in rows) + "\n"


def test_parse_two_joints_without_header():
    seq = parse_skeleton_csv(io.StringIO(csv_text([[0.0, 1, 2, 3, 4, 5, 6], [0.1, 7, 8, 9, 10, 11, 12]])), "a")
    assert seq.joint_count == 2
    assert seq.length == 2
    assert np.array_equal(seq.frames[1], [7, 8, 9, 10, 11, 12])
    assert np.array_equal(seq.timestamps, [0.0, 0.1])


def test_header_row_is_skipped():
    text = "time,j0_x,j0_y,j0_z\n0.0,1,2,3\n"
    seq = parse_skeleton_csv(io.StringIO(text))
    assert seq.length == 1
    assert seq.joint_count == 1


def test_joint_positions_are_per_joint_triples():
    seq = parse_skeleton_csv(io.StringIO(csv_text([[0.0, 1, 2, 3, 4, 5, 6]])))
    assert np.array_equal(seq.joint_positions()[0, 1], [4, 5, 6])


def test_non_numeric_cell_reports_row_and_column():
    with pytest.raises(ParseError) as excinfo:
        parse_skeleton_csv(io.StringIO("0.0,1,2,3\n0.1,1,abc,3\n"))
    assert (excinfo.value.row, excinfo.value.col) == (1, 2)


def test_non_finite_cell_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_skeleton_csv(io.StringIO("0.0,1,nan,3\n"))


def test_wrong_column_count_is_a_format_error():
    with pytest.raises(FormatError):
        parse_skeleton_csv(io.StringIO("0.0,1,2\n"))


def test_ragged_rows_are_a_format_error():
    with pytest.raises(FormatError):
        parse_skeleton_csv(io.StringIO("0.0,1,2,3\n0.1,1,2\n"))


def test_non_increasing_timestamps_are_a_format_error():
    with pytest.raises(FormatError):
        parse_skeleton_csv(io.StringIO("0.1,1,2,3\n0.1,1,2,3\n"))


def test_empty_file_is_a_format_error():
    with pytest.raises(FormatError):
        parse_skeleton_csv(io.StringIO(""))


def test_written_file_parses_back_exactly(rng, tmpdir_path):
    seq = SkeletonSequence("walk", 3, rng.normal(size=(5, 9)), np.arange(5) / 120.0)
    path = tmpdir_path / "walk.csv"
    with open(path, mode="wt", encoding="utf-8", newline="") as handle:
        write_skeleton_csv(seq, handle)
    parsed = read_skeleton_file(str(path))
    assert parsed.name == "walk"
    assert np.array_equal(parsed.frames, seq.frames)
    assert np.array_equal(parsed.timestamps, seq.timestamps)


@pytest.mark.parametrize("text, label", [("Mono", GestureLabel.MONO), ("bi", GestureLabel.BI), ("1", GestureLabel.BI)])
def test_label_parsing(text, label):
    assert GestureLabel.parse(text) == label


def test_unknown_label_raises():
    with pytest.raises(FormatError):
        GestureLabel.parse("Tri")


def test_labels_round_trip():
    stream = io.StringIO()
    write_labels([("Avion", GestureLabel.BI), ("Venir", GestureLabel.MONO)], stream)
    stream.seek(0)
    assert read_labels(stream) == {"Avion": GestureLabel.BI, "Venir": GestureLabel.MONO}


def test_label_rows_need_two_cells():
    with pytest.raises(FormatError):
        read_labels(io.StringIO("name,label\nAvion,Bi,extra\n"))


def test_missing_label_raises_labeling_error():
    with pytest.raises(LabelingError):
        label_for({"Avion": GestureLabel.BI}, "Venir")


def test_non_utf8_skeleton_file_is_a_parse_error(tmpdir_path):
    path = tmpdir_path / "broken.csv"
    path.write_bytes(b"\xff\xfe0.0,1,2,3\n")
    with pytest.raises(ParseError) as excinfo:
        read_skeleton_file(path)
    assert "broken" in str(excinfo.value)
    assert "UTF-8" in str(excinfo.value)


def test_non_utf8_label_file_is_a_format_error():
    stream = io.TextIOWrapper(io.BytesIO(b"Avion,\xffBi\n"), encoding="utf-8")
    with pytest.raises(FormatError):
        read_labels(stream)
