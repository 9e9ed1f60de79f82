import os

from setuptools import find_packages, setup

from overheadlab import __version__

# read the contents of your README file
this_directory = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(this_directory, "README.md"), encoding="utf-8") as f:
    long_description = f.read()

# allow setup.py to be run from any path
os.chdir(os.path.normpath(os.path.join(os.path.abspath(__file__), os.pardir)))

setup(
    name="overheadlab",
    version=__version__,
    description=(
        "Control overhead model and packet level simulator "
        "for reactive ad hoc routing protocols, as a Django app"
    ),
    license="GPL-3.0",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["testlab", "testlab.*"]),
    zip_safe=False,
    include_package_data=True,
    package_data={"overheadlab": ["scenarios/*.json"]},
    classifiers=[
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Framework :: Django",
        "Framework :: Django :: 3.1",
        "Intended Audience :: Science/Research",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3.8",
        "Topic :: System :: Networking",
        "Topic :: Scientific/Engineering",
    ],
    python_requires="~=3.8",
    install_requires=[
        "Django>=3.1",
        "celery>=4.4",
        "allianceauth-app-utils",
        "numpy>=1.17",
        "networkx>=2.4",
    ],
)
