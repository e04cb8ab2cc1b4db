#pragma once

#include <hdf5.h>

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pdegen/errors.hpp"

namespace pdegen::io {

enum class Precision { f32, f64 };

/// One named dense array of a dataset file, packed (b, t, x_1..x_d, v) with
/// the t and v axes omitted where they do not apply.
struct NamedArray {
    std::string name;
    std::vector<std::size_t> shape;
    std::vector<double> data;  // row-major

    std::size_t size() const {
        std::size_t s = 1;
        for (std::size_t d : shape) s *= d;
        return s;
    }
};

/// `${PDE name}--${Parameters}--${Config}.h5`
inline std::string make_filename(const std::string& pde, const std::string& parameters,
                                 const std::string& config) {
    return pde + "--" + parameters + "--" + config + ".h5";
}

namespace detail {

struct HidGuard {
    hid_t id;
    herr_t (*closer)(hid_t);
    ~HidGuard() {
        if (id >= 0) closer(id);
    }
};

inline hid_t quiet_plist() {
    // object header timestamps off, so identical content gives identical bytes
    hid_t p = H5Pcreate(H5P_DATASET_CREATE);
    H5Pset_obj_track_times(p, false);
    return p;
}

}  // namespace detail

/// Writes the arrays and a UTF-8 YAML metadata attribute into a new HDF5
/// file. Arrays are stored in the requested precision and chunked by the
/// leading (sample) axis so batches can be streamed. Files with identical
/// content are byte-identical (object timestamps disabled).
inline void write_dataset(const std::string& path, const std::vector<NamedArray>& arrays,
                          const std::string& yaml_metadata,
                          Precision precision = Precision::f32) {
    hid_t fcpl = H5Pcreate(H5P_FILE_CREATE);
    H5Pset_obj_track_times(fcpl, false);
    hid_t file = H5Fcreate(path.c_str(), H5F_ACC_TRUNC, fcpl, H5P_DEFAULT);
    H5Pclose(fcpl);
    if (file < 0) throw IoError("cannot create " + path);
    detail::HidGuard fg{file, H5Fclose};

    bool failed = false;
    for (const auto& arr : arrays) {
        std::vector<hsize_t> dims(arr.shape.begin(), arr.shape.end());
        hid_t space = H5Screate_simple(int(dims.size()), dims.data(), nullptr);
        detail::HidGuard sg{space, H5Sclose};

        hid_t dcpl = detail::quiet_plist();
        if (!dims.empty() && dims[0] > 1) {
            std::vector<hsize_t> chunk(dims);
            chunk[0] = 1;  // one sample per chunk
            H5Pset_chunk(dcpl, int(chunk.size()), chunk.data());
        }
        detail::HidGuard pg{dcpl, H5Pclose};

        hid_t ftype = precision == Precision::f32 ? H5T_IEEE_F32LE : H5T_IEEE_F64LE;
        hid_t dset = H5Dcreate2(file, arr.name.c_str(), ftype, space, H5P_DEFAULT, dcpl,
                                H5P_DEFAULT);
        if (dset < 0) {
            failed = true;
            break;
        }
        detail::HidGuard dg{dset, H5Dclose};
        herr_t st;
        if (precision == Precision::f32) {
            std::vector<float> f32(arr.data.begin(), arr.data.end());
            st = H5Dwrite(dset, H5T_NATIVE_FLOAT, H5S_ALL, H5S_ALL, H5P_DEFAULT, f32.data());
        } else {
            st = H5Dwrite(dset, H5T_NATIVE_DOUBLE, H5S_ALL, H5S_ALL, H5P_DEFAULT,
                          arr.data.data());
        }
        if (st < 0) {
            failed = true;
            break;
        }
    }

    if (!failed) {
        hid_t stype = H5Tcopy(H5T_C_S1);
        H5Tset_size(stype, yaml_metadata.size() + 1);
        H5Tset_cset(stype, H5T_CSET_UTF8);
        hid_t aspace = H5Screate(H5S_SCALAR);
        hid_t attr = H5Acreate2(file, "config", stype, aspace, H5P_DEFAULT, H5P_DEFAULT);
        if (attr < 0 || H5Awrite(attr, stype, yaml_metadata.c_str()) < 0) failed = true;
        if (attr >= 0) H5Aclose(attr);
        H5Sclose(aspace);
        H5Tclose(stype);
    }

    if (failed) {
        // partial-file cleanup
        H5Fclose(fg.id);
        fg.id = -1;
        std::remove(path.c_str());
        throw IoError("failed writing dataset " + path);
    }
}

struct DatasetContents {
    std::vector<NamedArray> arrays;
    std::string yaml_metadata;
};

/// Exact inverse of write_dataset. Data is widened to double in memory; the
/// stored bit pattern is preserved for both precisions.
inline DatasetContents read_dataset(const std::string& path) {
    if (!std::filesystem::exists(path)) throw IoError("no such file: " + path);
    H5E_auto2_t old_fn;
    void* old_data;
    H5Eget_auto2(H5E_DEFAULT, &old_fn, &old_data);
    H5Eset_auto2(H5E_DEFAULT, nullptr, nullptr);  // report via exceptions, not stderr
    hid_t file = H5Fopen(path.c_str(), H5F_ACC_RDONLY, H5P_DEFAULT);
    H5Eset_auto2(H5E_DEFAULT, old_fn, old_data);
    if (file < 0) throw IoError("not a readable HDF5 file: " + path);
    detail::HidGuard fg{file, H5Fclose};

    DatasetContents out;
    // iterate datasets in creation order of the root group
    H5G_info_t ginfo;
    H5Gget_info(file, &ginfo);
    for (hsize_t i = 0; i < ginfo.nlinks; ++i) {
        char name[256];
        H5Lget_name_by_idx(file, ".", H5_INDEX_NAME, H5_ITER_INC, i, name, sizeof(name),
                           H5P_DEFAULT);
        hid_t dset = H5Dopen2(file, name, H5P_DEFAULT);
        if (dset < 0) throw IoError("cannot open dataset " + std::string(name));
        detail::HidGuard dg{dset, H5Dclose};
        hid_t space = H5Dget_space(dset);
        detail::HidGuard sg{space, H5Sclose};
        int nd = H5Sget_simple_extent_ndims(space);
        std::vector<hsize_t> dims;
        dims.resize(std::size_t(nd));
        H5Sget_simple_extent_dims(space, dims.data(), nullptr);

        NamedArray arr;
        arr.name = name;
        arr.shape.assign(dims.begin(), dims.end());
        arr.data.resize(arr.size());
        if (H5Dread(dset, H5T_NATIVE_DOUBLE, H5S_ALL, H5S_ALL, H5P_DEFAULT, arr.data.data()) < 0)
            throw IoError("failed reading dataset " + std::string(name));
        out.arrays.push_back(std::move(arr));
    }

    if (H5Aexists(file, "config") > 0) {
        hid_t attr = H5Aopen(file, "config", H5P_DEFAULT);
        detail::HidGuard ag{attr, H5Aclose};
        hid_t type = H5Aget_type(attr);
        std::size_t len = H5Tget_size(type);
        std::vector<char> buf(len + 1, '\0');
        H5Aread(attr, type, buf.data());
        H5Tclose(type);
        out.yaml_metadata = buf.data();
    }
    return out;
}

}  // namespace pdegen::io
