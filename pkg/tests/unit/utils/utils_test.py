# Copyright 2024 Google LLC. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Unit tests for utils module."""

# pylint: disable=line-too-long
# pylint: disable=missing-function-docstring
# pylint: disable=unused-import

from contextlib import nullcontext as does_not_raise
import os
import sys
from typing import List, Optional

import pytest
import yaml

from dbg_compactor.utils.constants import ESTIMATE_TEMPLATE
from dbg_compactor.utils.exceptions import FastaFormatError, TableCapacityError
from dbg_compactor.utils.utils import (
    coalesce,
    make_dirs,
    open_output,
    read_yaml_file,
    render_jinja,
    render_template,
    tsv_lines,
    write_file,
    write_yaml_file
)


@pytest.mark.parametrize(
    'directories, existance, expectation',
    [
        (['dir1', 'dir2'], [True, True], does_not_raise()),
        (['dir1', 'dir1'], [True, False], does_not_raise()),
        (['\0', 'dir1'], [True, True], pytest.raises(ValueError))
    ]
)
def test_make_dirs(tmp_path, directories: List[str], existance: List[bool], expectation):
    """Tests make_dirs, which creates a list of directories if they do not
    already exist. There are three test cases for this function:
        1. Expected outcome, folders created as expected.
        2. Duplicate folder names given, expecting only one folder created.
        3. Invalid folder name given, expects an error.

    Args:
        directories (List[str]): List of directories to be created.
        existance (List[bool]): List of booleans indicating whether the listed directories to
            be created are expected to exist after invoking make_dirs.
        expectation: Any corresponding expected errors for each set of parameters.
    """
    paths = [str(tmp_path / d) for d in directories]
    with expectation:
        make_dirs(directories=paths)
        for directory, exist in zip(paths, existance):
            assert os.path.exists(directory) == exist
            if exist:
                os.rmdir(directory)


@pytest.mark.parametrize(
    'text, expected, expectation',
    [
        ('k: 25\nrounds: 2\n', {'k': 25, 'rounds': 2}, does_not_raise()),
        ('', {}, does_not_raise()),
        ('- 1\n- 2\n', None, pytest.raises(ValueError)),
        ('k: [25\n', None, pytest.raises(yaml.YAMLError))
    ]
)
def test_read_yaml_file(tmp_path, text: str, expected: Optional[dict], expectation):
    """Tests read_yaml_file, which reads a yaml file and returns the file
    contents as a dict. There are four test cases for this function:
        1. Expected outcome, file read in with correct content.
        2. Empty file, expecting an empty dict.
        3. Top level is a list, expecting a ValueError.
        4. File is not valid yaml, expecting a yaml error.

    Args:
        text (str): Raw contents of the yaml file.
        expected (Optional[dict]): Expected parsed contents.
        expectation: Any corresponding expected errors for each set of
            parameters.
    """
    filepath = tmp_path / 'test.yaml'
    filepath.write_text(text, encoding='utf-8')
    with expectation:
        assert read_yaml_file(filepath=str(filepath)) == expected


@pytest.mark.parametrize(
    'filename, mode, expectation',
    [
        ('test.yaml', 'w', does_not_raise()),
        ('nonexistent/directory/test.yaml', 'w', pytest.raises(FileNotFoundError)),
        ('test.yaml', 'r', pytest.raises(IOError))
    ]
)
def test_write_yaml(tmp_path, filename: str, mode: str, expectation):
    """Tests write_yaml_file, which writes a yaml file. There are three sets of
    test cases for this function:
        1. Expected outcome, yaml is written correctly and keys keep their order.
        2. Invalid file path given, expecting a FileNotFoundError.
        3. Invalid mode given, expecting an IOError.

    Args:
        filename (str): Name of the yaml file under the temporary directory.
        mode (str): Read/write mode to be used.
        expectation: Any corresponding expected errors for each set of
            parameters.
    """
    filepath = str(tmp_path / filename)
    contents = {'rounds': 2, 'k': 25}
    with expectation:
        write_yaml_file(filepath=filepath, contents=contents, mode=mode)
        with open(file=filepath, mode='r', encoding='utf-8') as file:
            text = file.read()
        assert yaml.safe_load(text) == contents
        assert text.index('rounds') < text.index('k:')


@pytest.mark.parametrize(
    'filename, text, expectation',
    [
        ('test.txt', 'a\tb\nc\td\n', does_not_raise()),
        ('missing/test.txt', 'a\n', pytest.raises(OSError))
    ]
)
def test_write_file(tmp_path, filename: str, text: str, expectation):
    """Tests write_file, which writes a string to a text file. There are two
    test cases for this function:
        1. Expected outcome, file is written as expected with unix newlines.
        2. Parent directory does not exist, expecting an OSError.

    Args:
        filename (str): Name of the file under the temporary directory.
        text (str): Content to be written to the file.
        expectation: Any corresponding expected errors for each set of
            parameters.
    """
    filepath = tmp_path / filename
    with expectation:
        write_file(filepath=str(filepath), text=text, mode='w')
        assert filepath.read_bytes() == text.encode('utf-8')


@pytest.mark.parametrize('filepath', ['-', None])
def test_open_output_stdout(filepath: Optional[str]):
    """Tests open_output, which yields standard output for '-' and None and
    never closes it.

    Args:
        filepath (Optional[str]): Output path selecting standard output.
    """
    with open_output(filepath) as stream:
        assert stream is sys.stdout
    assert not sys.stdout.closed


def test_open_output_file(tmp_path):
    """Tests open_output, which creates missing parent directories and closes
    the file on exit."""
    filepath = tmp_path / 'out' / 'graph.gfa'
    with open_output(str(filepath)) as stream:
        stream.write('H\tVN:Z:1.0\n')
    assert stream.closed
    assert filepath.read_text(encoding='utf-8') == 'H\tVN:Z:1.0\n'


def test_render_jinja(tmp_path):
    """Tests render_jinja, which renders a template file and keeps its trailing newline."""
    template = tmp_path / 'template.j2'
    template.write_text('k={{ k }}\n', encoding='utf-8')
    assert render_jinja(str(template), k=25) == 'k=25\n'


def test_render_template():
    """Tests render_template, which renders a template shipped with the package."""
    rendered = render_template(ESTIMATE_TEMPLATE, estimates={'q': 0.0239686, 'expected_marks': 12.0})
    assert rendered.splitlines() == ['quantity\tvalue', 'q\t0.0239686', 'expected_marks\t12']


def test_tsv_lines():
    """Tests tsv_lines, which yields a header line then one line per row."""
    lines = list(tsv_lines(('round', 'marks'), [(1, 10), (2, None)]))
    assert lines == ['round\tmarks\n', '1\t10\n', '2\tNone\n']


@pytest.mark.parametrize(
    'args, expected',
    [
        ((None, 0, 5), 0),
        ((None, None), None),
        (('a', 'b'), 'a')
    ]
)
def test_coalesce(args: tuple, expected):
    """Tests coalesce, which returns the first non-None argument. There are
    three test cases for this function:
        1. A falsy but non-None value is returned.
        2. All arguments are None, expecting None.
        3. The first argument is returned.

    Args:
        args (tuple): The arguments.
        expected: The expected return value.
    """
    assert coalesce(*args) == expected


def test_fasta_format_error_message():
    """Tests FastaFormatError, which prefixes the message with path and line number."""
    err = FastaFormatError('sequence data before the first header', path='genome.fa', line_number=3)
    assert str(err) == 'genome.fa:3: sequence data before the first header'
    assert isinstance(err, ValueError)
    assert str(FastaFormatError('empty file')) == 'empty file'


def test_table_capacity_error_message():
    """Tests TableCapacityError, which names the round and suggests more rounds."""
    err = TableCapacityError(cardinality=11, capacity=10, round_index=1, load_estimate=20.4)
    assert isinstance(err, MemoryError)
    assert 'in round 2' in str(err)
    assert 'estimated round load 20' in str(err)
    assert 'Increase the number of rounds' in str(err)
