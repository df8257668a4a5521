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

"""Utility functions and globals to be used by all
   other modules in this package."""

# pylint: disable=C0103
# pylint: disable=line-too-long

try:
    from importlib.resources import files as import_files
except ImportError:
    # Try backported to PY<37 `importlib_resources`
    from importlib_resources import files as import_files

import contextlib
import os
import sys
from typing import Iterable, Iterator, Optional, Sequence, TextIO

import yaml
from jinja2 import Template

from dbg_compactor.utils.constants import TEMPLATES_PATH


def make_dirs(directories: list):
    """Makes directories with the specified names.

    Args:
        directories (list): Path of the directories to make.
    """
    for d in directories:
        try:
            os.makedirs(d)
        except FileExistsError:
            pass


def read_yaml_file(filepath: str) -> dict:
    """Reads a yaml and returns file contents as a dict. Defaults to utf-8 encoding.

    Args:
        filepath (str): Path to the yaml.

    Returns:
        dict: Contents of the yaml, or an empty dict for an empty file.

    Raises:
        yaml.YAMLError: If the file is not valid yaml.
        ValueError: If the top level of the yaml is not a mapping.
    """
    try:
        with open(filepath, 'r', encoding='utf-8') as file:
            file_dict = yaml.safe_load(file)
    except yaml.YAMLError as err:
        raise yaml.YAMLError(f'Error reading file. {err}') from err
    if file_dict is None:
        return {}
    if not isinstance(file_dict, dict):
        raise ValueError(f'Expected a mapping at the top level of {filepath}, got {type(file_dict).__name__}.')
    return file_dict


def write_yaml_file(filepath: str, contents: dict, mode: str):
    """Writes a dictionary to yaml. Defaults to utf-8 encoding.

    Args:
        filepath (str): Path to the file.
        contents (dict): Dictionary to be written to yaml.
        mode (str): Read/write mode to be used.

    Raises:
        yaml.YAMLError: An error is encountered while writing the file.
    """
    try:
        with open(filepath, mode, encoding='utf-8') as file:
            yaml.safe_dump(contents, file, sort_keys=False)
    except yaml.YAMLError as err:
        raise yaml.YAMLError(f'Error writing to file. {err}') from err


def write_file(filepath: str, text: str, mode: str):
    """Writes a file at the specified path. Defaults to utf-8 encoding.

    Args:
        filepath (str): Path to the file.
        text (str): Text to be written to file.
        mode (str): Read/write mode to be used.

    Raises:
        OSError: An error is encountered writing the file.
    """
    try:
        with open(filepath, mode, encoding='utf-8', newline='\n') as file:
            file.write(text)
    except OSError as err:
        raise OSError(f'Error writing to file. {err}') from err


@contextlib.contextmanager
def open_output(filepath: Optional[str]) -> Iterator[TextIO]:
    """Opens a text output stream; '-' or None selects standard output.

    Args:
        filepath (Optional[str]): Path to the output file.

    Yields:
        TextIO: The writable stream. Standard output is never closed.
    """
    if filepath is None or filepath == '-':
        yield sys.stdout
        return
    directory = os.path.dirname(filepath)
    if directory:
        make_dirs([directory])
    with open(filepath, 'w', encoding='utf-8', newline='\n') as file:
        yield file


def render_jinja(template_path, **template_vars):
    """Renders a Jinja2 template with provided variables.

    Args:
        template_path (str): The path to the Jinja2 template file.
        **template_vars: Keyword arguments representing variables to substitute in the template.

    Returns:
        str: The rendered template as a string.
    """
    with open(template_path, 'r', encoding='utf-8') as f:
        template = Template(f.read(), keep_trailing_newline=True)
        return template.render(**template_vars)


def render_template(template_name: str, **template_vars) -> str:
    """Renders one of the templates shipped with the package.

    Args:
        template_name (str): File name of the template under the package templates directory.
        **template_vars: Variables to substitute in the template.

    Returns:
        str: The rendered template.
    """
    return render_jinja(
        template_path=import_files(TEMPLATES_PATH) / template_name,
        **template_vars)


def tsv_lines(header: Sequence[str], rows: Iterable[Sequence]) -> Iterator[str]:
    """Yields tab separated lines, header first, each terminated by a newline.

    Args:
        header (Sequence[str]): Column names.
        rows (Iterable[Sequence]): Row values; each value is formatted with str().

    Yields:
        str: One line per header or row.
    """
    yield '\t'.join(header) + '\n'
    for row in rows:
        yield '\t'.join(str(value) for value in row) + '\n'


def coalesce(*arg):
    """Creates the first non-None value from a sequence of arguments.

    Returns:
        The first non-None argument, or None if all arguments are None.
    """
    for el in arg:
        if el is not None:
            return el
    return None
