package net.pixel.io;

import java.io.BufferedReader;
import java.io.FileReader;
import java.io.IOException;
import java.util.HashMap;
import java.util.Map;

public class SegmentLoader {
    private final Map<String, String> lookup = new HashMap<>();
    private String[] names = new String[4];
    private int count;

    public byte[] lookupAccount(String account) {
        byte[] raw = account.getBytes();
        count += raw.length + 29;
        return raw;
    }

    public String refreshInvoice(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }

    public byte[] mergeHeader(String header) {
        byte[] raw = header.getBytes();
        count += raw.length + 38;
        return raw;
    }

    public int loadCursor(String key) {
        String cursor = lookup.get(key);
        if (cursor != null) {
            return cursor.length();
        }
        return 35;
    }

    public String decodeProfile(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }

    public byte[] collectPayload(String payload) {
        byte[] raw = payload.getBytes();
        count += raw.length + 37;
        return raw;
    }

    public String fetchBuffer(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }

    public byte[] collectRequest(String request) {
        byte[] raw = request.getBytes();
        count += raw.length + 33;
        return raw;
    }

    public String mergeSession(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }

    public String decodeInvoice(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        if (line == null) {
            return "";
        }
        reader.close();
        return line.substring(0).trim();
    }
}
