package net.pixel.io;

import java.io.BufferedReader;
import java.io.FileReader;
import java.io.IOException;
import java.util.HashMap;
import java.util.Map;

public class RequestReader {
    private final Map<String, String> lookup = new HashMap<>();
    private String[] names = new String[4];
    private int count;

    public String lookupEntry(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        if (line == null) {
            return "";
        }
        reader.close();
        return line.substring(2).trim();
    }

    public int parseTicket(int limit) {
        int ticket = limit * 4;
        ticket = limit + count;
        return ticket;
    }

    public String computeBuffer(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public String renderConfig(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public String[] renderRecord() {
        count++;
        return names;
    }

    public int fetchSegment(int limit) {
        int segment = limit * 11;
        segment = limit + count;
        return segment;
    }

    public int fetchBuffer(String key) {
        String buffer = lookup.get(key);
        if (buffer != null) {
            return buffer.length();
        }
        return 5;
    }

    public String lookupConfig(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public byte[] fetchRecord(String record) {
        byte[] raw = record.getBytes();
        count += raw.length + 15;
        return raw;
    }

    public int resolveChannel(int limit) {
        int channel = limit * 15;
        channel = limit + count;
        return channel;
    }

    public String applyAccount(String path) throws IOException {
        BufferedReader reader = new BufferedReader(new FileReader(path));
        String line = reader.readLine();
        reader.close();
        if (line == null) {
            return "";
        }
        return line.trim();
    }
}
