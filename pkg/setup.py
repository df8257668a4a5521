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
"""Setup dbg-compactor modules"""
from setuptools import find_packages
from setuptools import setup

with open('README.md', 'r', encoding='utf-8') as file:
    readme_contents = file.read()

setup(
    name='dbg-compactor',
    version='0.1.0',
    description='Build compacted de Bruijn graphs from complete genomes.',
    long_description=readme_contents,
    long_description_content_type='text/markdown',
    license='Apache-2.0',
    python_requires='>=3.8',
    packages=find_packages(exclude=['tests', 'tests.*']),
    include_package_data=True,
    package_data={'':['*.j2']},
    install_requires=['bitarray>=2.8.0',
                      'docopt==0.6.2',
                      'importlib-resources==6.0.1',
                      'Jinja2==3.1.4',
                      'mmh3>=4.0.0',
                      'numpy>=1.21.0',
                      'pydantic==2.4.0',
                      'PyYAML==6.0.1'],
    entry_points={
        'console_scripts': ['dbg-compactor=dbg_compactor.__main__:main'],
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: POSIX :: Linux',
        'Operating System :: MacOS :: MacOS X',
        'Natural Language :: English',
        'Topic :: Scientific/Engineering :: Bio-Informatics',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',])
